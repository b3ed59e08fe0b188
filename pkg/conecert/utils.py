# General use utility functions.
import logging
import os
from multiprocessing.pool import ThreadPool

import numpy as np
from tqdm import tqdm

THREADS_VARIABLE = 'CONECERT_THREADS'


def progress(iterable, total=None, desc='', enabled=None):
    """Terminal progress bar on stderr.

    @params:
    iterable  - Required : items to iterate over
    total     - Optional : number of items, when len() is unavailable (Int)
    desc      - Optional : prefix shown before the bar (Str)
    enabled   - Optional : force the bar on or off; by default it is shown
                           when the root logger lets INFO messages through
    """
    if enabled is None:
        enabled = logging.getLogger().isEnabledFor(logging.INFO)
    return tqdm(iterable, total=total, desc=desc, disable=not enabled,
                leave=False)


def threads_from_env(default=1):
    value = os.environ.get(THREADS_VARIABLE, '').strip()
    if not value:
        return default
    try:
        threads = int(value)
    except ValueError:
        raise ValueError("{} must be an integer, got '{}'".format(
            THREADS_VARIABLE, value))
    return max(1, threads)


class WorkerMap(object):
    """Abstracts a pool of worker threads; switches to no workers if
    jobs <= 1.

    Results always come back in input order, whatever the scheduling."""
    def __init__(self, jobs):
        self.jobs = jobs
        if jobs <= 1:
            self.pool = None
            self.map_function = lambda func, items: list(map(func, items))
        else:
            self.pool = ThreadPool(processes=jobs)
            self.map_function = self.pool.map

    def __enter__(self):
        return self.map_function

    def __exit__(self, type, value, traceback):
        if self.pool is not None:
            self.pool.terminate()


def pairwise_sum(values, chunk=64):
    """Fixed-order pairwise summation along the first axis.

    Values are summed in chunks of ``chunk`` entries, then the partial sums
    are added pairwise, so the result only depends on the input order.
    """
    values = np.asarray(values)
    if values.shape[0] == 0:
        return np.zeros(values.shape[1:], dtype=values.dtype)
    partial = [values[i:i + chunk].sum(axis=0)
               for i in range(0, values.shape[0], chunk)]
    while len(partial) > 1:
        paired = [partial[i] + partial[i + 1]
                  for i in range(0, len(partial) - 1, 2)]
        if len(partial) % 2:
            paired.append(partial[-1])
        partial = paired
    return partial[0]
