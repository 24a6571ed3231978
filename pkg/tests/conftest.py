from pytest import fixture

import synth


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: checks over synthetic corpora of 50 to 200 plans')


@fixture(scope='session')
def synthetic_plans():
    """The first three plans of the seed 1 corpus: five, four and three rooms."""
    return [synth.generate_plan(1, index) for index in range(1, 4)]


@fixture(scope='session')
def synthetic_plan(synthetic_plans):
    return synthetic_plans[0]
