"""Measure and report the cost of the second-step methods.

One objective evaluation is timed for each search objective, and one
complete run for every method, on a mixed pair of sparse AR(1) sources.

Synopsis:
    $ python objective_time.py
    one objective evaluation (T = 16384):
        MI:          1.1 ms
        O3:          210 µs
        ...

    complete method (T = 16384):
        MI:          2.0 s
        FTPCA:       95 ms
        ...
"""

from functools import partial

from twostep_bss import (Method, ObjectiveKind, ObjectiveTag, RunningStats,
                         SourceKind, SourceSpec, Stopwatch, TimeSeriesSet,
                         format_duration, generate_sources, random_mixing,
                         run_method, whiten)

SAMPLES = 16384
REPEAT = 20


def _time(fn, repeat):
    stats = RunningStats()
    watch = Stopwatch()
    for _ in range(repeat):
        with watch:
            fn()
        stats.add(watch.elapsed)
    return stats.mean


def main():
    _format = partial(format_duration, precision=2)
    sources = generate_sources(
        (SourceSpec(SourceKind.AR1, (0.9, 'sparse'), seed=1),
         SourceSpec(SourceKind.AR1, (0.2, 'sparse'), seed=2)), SAMPLES)
    z = whiten(TimeSeriesSet(random_mixing(0) @ sources.data)).whitened

    print(f'one objective evaluation (T = {SAMPLES}):')
    for tag in ObjectiveTag:
        kind = ObjectiveKind(tag)
        duration = _time(partial(kind.evaluate, z), REPEAT)
        print(f'    {tag.value + ":":13s}{_format(duration)}')

    print()
    print(f'complete method (T = {SAMPLES}):')
    for method in Method:
        duration = _time(partial(run_method, method, z), 1)
        print(f'    {method.value + ":":13s}{_format(duration)}')


if __name__ == '__main__':
    main()
