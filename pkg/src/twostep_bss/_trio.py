import trio
try:
    from trio import to_thread as _to_thread
    _run_sync = _to_thread.run_sync
except ImportError:
    _run_sync = trio.run_sync_in_worker_thread

from ._harness import bench_jobs, run_job, summarize


async def run_trials_async(config, jobs=None):
    """Run every bench trial in worker threads, at most `jobs` at a time.

    Records come back in the same order as a serial run, regardless of
    completion order.  numpy releases the GIL in its heavy kernels, so
    threads give real concurrency for the spectral and search methods.
    """
    if jobs is not None and jobs < 1:
        raise ValueError('jobs must be at least 1')
    work = bench_jobs(config)
    limiter = trio.CapacityLimiter(jobs or len(work) or 1)
    results = [None] * len(work)

    async def _run(index, job):
        results[index] = await _run_sync(run_job, config, job, limiter=limiter)

    async with trio.open_nursery() as nursery:
        for index, job in enumerate(work):
            nursery.start_soon(_run, index, job)
    return [record for records in results for record in records]


async def run_bench_async(config, jobs=None, log_fn=print):
    return summarize(config, await run_trials_async(config, jobs), log_fn)


def run_bench_parallel(config, jobs, log_fn=print):
    """Blocking entry point: trio event loop around run_bench_async"""
    return trio.run(run_bench_async, config, jobs, log_fn)
