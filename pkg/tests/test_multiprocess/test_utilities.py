import os

from multiprocess import Pool, available_cores


def test_cores():
    cores_number = available_cores()

    assert type(cores_number) == int
    assert 1 <= cores_number <= os.cpu_count()


def test_pool_of_all_cores():
    # processes=None uses every available core
    assert Pool(None).imap(abs, [-1, -2, 3]) == [1, 2, 3]
