from contextlib import contextmanager

from multiprocessing import Queue, Process
from tqdm import tqdm

from multiprocess.signals import STOP


def progress_bar_worker(queue, total, description=None):
    """Advance a bar by the steps arriving on `queue` until `STOP`."""
    bar = tqdm(total=total, desc=description)

    for step in iter(queue.get, STOP):
        bar.update(step)

    bar.close()


@contextmanager
def progress_bar(total, description=None):
    progress_queue = Queue()

    progress = Process(target=progress_bar_worker, args=(progress_queue, total, description))

    progress.start()

    yield progress_queue

    progress_queue.put(STOP)
    progress.join()
