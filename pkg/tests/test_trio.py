from dataclasses import replace
from unittest.mock import Mock

import pytest

from twostep_bss import (AngleGrid, BenchConfig, MethodSettings, SourceKind, SourceSpec,
                         run_bench, run_bench_async, run_bench_parallel)
from twostep_bss import _trio


def _config(**kwargs):
    return BenchConfig(methods=('O3', 'SOBI', 'DerivPCA'), trials=4, samples=2048,
                       snrs=(None, 50),
                       sources=(SourceSpec(SourceKind.AR1, (0.9, 'sparse')),
                                SourceSpec(SourceKind.AR1, (0.3, 'sparse'))),
                       settings=MethodSettings(grid=AngleGrid(step=1.0)), **kwargs)


def _untimed(records):
    return [replace(r, wall_time=None) for r in records]


async def test_run_trials_async_order():
    config = _config()
    serial = run_bench(config, log_fn=Mock())
    records = await _trio.run_trials_async(config, jobs=3)
    assert _untimed(records) == _untimed(serial.records)


async def test_run_bench_async():
    config = _config(master_seed=3)
    log_fn = Mock()
    table = await run_bench_async(config, jobs=2, log_fn=log_fn)
    assert len(table.rows) == 6
    assert log_fn.call_count == 6
    serial = run_bench(config, log_fn=Mock())
    for row, expected in zip(table.rows, serial.rows):
        assert (row.method, row.snr, row.trials) == (expected.method, expected.snr,
                                                     expected.trials)
        assert row.mean_error == expected.mean_error


async def test_run_trials_async_unlimited():
    config = _config(master_seed=1)
    records = await _trio.run_trials_async(config)
    assert len(records) == 4 * 2 * 3


async def test_run_trials_async_invalid_jobs():
    with pytest.raises(ValueError):
        await _trio.run_trials_async(_config(), jobs=0)


def test_run_bench_parallel():
    config = _config(master_seed=2)
    table = run_bench_parallel(config, 4, log_fn=Mock())
    assert _untimed(table.records) == _untimed(run_bench(config, log_fn=Mock()).records)
