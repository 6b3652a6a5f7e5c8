import math
from time import perf_counter


def format_duration(duration, precision=3, delimiter=' '):
    """Returns human readable duration.

    >>> format_duration(.0507)
    '50.7 ms'
    """
    units = (('s', 1), ('ms', 1e3), ('µs', 1e6), ('ns', 1e9))
    i = len(units) - 1
    if duration > 0:
        i = min(-int(math.floor(math.log10(duration)) // 3), i)
    symbol, scale = units[max(i, 0)]
    # constant precision, keeping trailing zeros but don't end in decimal point
    value = f'{duration * scale:#.{precision}g}'.rstrip('.')
    return f'{value}{delimiter}{symbol}'


class Stopwatch:
    """Wall-clock timer for one method run

    Use as a context manager; `elapsed` holds the duration of the last
    completed block.  Blocks exiting with an exception are not recorded.

        watch = Stopwatch()
        with watch:
            result = sobi(z)
        print(watch.elapsed)
    """

    def __init__(self, *, time_fn=perf_counter):
        """
        :param time_fn: function which returns the current time in seconds.
            (A None value will raise NotImplementedError.)
        """
        if not time_fn:
            raise NotImplementedError
        self._time_fn = time_fn
        self._start = None
        self.elapsed = None

    def __enter__(self):
        if self._start is not None:
            raise RuntimeError('Stopwatch is not re-entrant')
        self._start = self._time_fn()
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        current_time = self._time_fn()
        start, self._start = self._start, None
        if exc_type is None:
            self.elapsed = current_time - start


class RunningStats:
    """Streaming mean and standard deviation

    https://en.wikipedia.org/wiki/Algorithms_for_calculating_variance#Welford's_online_algorithm
    """

    def __init__(self):
        self.count = 0
        self.mean = 0.0
        self._m2 = 0.0

    def add(self, value):
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self._m2 += delta * (value - self.mean)

    @property
    def std(self):
        """Population standard deviation; 0 for fewer than two values"""
        return math.sqrt(self._m2 / self.count) if self.count > 1 else 0.0


def method_summary(name, errors, times, failures=0):
    """One-line report of a method's bench results

    output synopsis:
        method "O3": avg error 0.412° ± 0.201°, avg 12.3 ms ± 1.10 ms in 20 runs
    """
    if errors.count == 0:
        return f'method "{name}": no successful runs, {failures} failed'
    line = f'method "{name}": '
    if errors.count > 1:
        line += (f'avg error {errors.mean:.3f}° ± {errors.std:.3f}°, '
                 f'avg {format_duration(times.mean)} ± {format_duration(times.std)} '
                 f'in {errors.count} runs')
    else:
        line += f'error {errors.mean:.3f}°, {format_duration(times.mean)}'
    if failures:
        line += f', {failures} failed'
    return line
