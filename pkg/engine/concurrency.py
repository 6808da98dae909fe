"""
Order-preserving parallel map used by every sweep.

Work items are independent and pure, so threads are enough; numpy drops
the GIL inside its kernels. Results come back in input order whatever the
worker count, which keeps every CSV byte-identical across thread counts.
"""
import logging
from concurrent.futures import ThreadPoolExecutor

logger = logging.getLogger(__name__)


def parallel_map(fn, items, workers=1):
    """Apply fn to every item, possibly on a thread pool.

    Arguments:
        fn : callable taking one item
        items : iterable of work items
        workers : number of threads; 1 or less runs serially

    Returns :: list of results in the order of items
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("mapping %d items over %d workers", len(items), workers)
    with ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
