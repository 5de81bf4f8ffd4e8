import numpy as np
import pytest

from hospectra import (
    EstimationConfig,
    ParameterError,
    SegmentConfig,
    SmoothingPlan,
    WorkerConfig,
    estimate_spectrum,
    generate_qpc,
    parallel_estimate,
    partition_domain,
    principal_domain,
)
from hospectra.bench import measure_peak_memory


class TestPartitionDomain:
    def test_single_worker_gets_everything(self):
        dom = principal_domain(3, 16)
        parts = partition_domain(dom, WorkerConfig(p=1))
        assert len(parts) == 1
        assert np.array_equal(parts[0], dom)

    def test_point_blocks_sizes_differ_by_at_most_one(self):
        dom = principal_domain(3, 8)  # 6 points
        parts = partition_domain(dom, WorkerConfig(p=4, partition="point_blocks"))
        assert sorted(len(p) for p in parts) == [1, 1, 2, 2]

    def test_every_point_appears_exactly_once(self):
        dom = principal_domain(3, 64)
        for mode in ("row_blocks", "point_blocks"):
            parts = partition_domain(dom, WorkerConfig(p=8, partition=mode))
            assert len(parts) == 8
            stacked = np.concatenate([p for p in parts if len(p)])
            assert np.array_equal(stacked, dom), mode

    def test_row_blocks_keep_rows_whole(self):
        dom = principal_domain(3, 64)
        parts = partition_domain(dom, WorkerConfig(p=5, partition="row_blocks"))
        seen_rows = [set(int(r) for r in p[:, 0]) for p in parts if len(p)]
        for a, b in zip(seen_rows, seen_rows[1:]):
            assert not (a & b)

    def test_more_workers_than_points(self):
        dom = principal_domain(3, 4)  # 2 points
        parts = partition_domain(dom, WorkerConfig(p=6, partition="point_blocks"))
        assert sum(len(p) for p in parts) == len(dom)

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            WorkerConfig(p=0)
        with pytest.raises(ParameterError):
            WorkerConfig(p=2, partition="diagonal")


class TestParallelEstimate:
    def test_single_worker_identical_to_serial(self):
        series = generate_qpc(0.1, 0.15, 128, 0.4, seed=3)
        cfg = EstimationConfig(3, SegmentConfig(m=128), 5, SmoothingPlan.EFFICIENT)
        serial = estimate_spectrum(series, cfg)
        par = parallel_estimate(series, cfg, WorkerConfig(p=1))
        assert np.array_equal(serial.values, par.values)

    @pytest.mark.parametrize("plan", [SmoothingPlan.FAST, SmoothingPlan.EFFICIENT, SmoothingPlan.STREAMING])
    @pytest.mark.parametrize("partition", ["row_blocks", "point_blocks"])
    def test_bit_identical_across_worker_counts(self, plan, partition):
        series = generate_qpc(0.1, 0.15, 256, 0.4, seed=4)
        cfg = EstimationConfig(3, SegmentConfig(m=256), 9, plan)
        ref = estimate_spectrum(series, cfg)
        for p in (2, 4, 8):
            got = parallel_estimate(series, cfg, WorkerConfig(p=p, partition=partition))
            assert np.array_equal(ref.values, got.values), (plan, partition, p)
            assert np.array_equal(ref.indices, got.indices)

    def test_bit_identical_order4(self):
        series = generate_qpc(0.1, 0.15, 64, 0.4, seed=5)
        cfg = EstimationConfig(4, SegmentConfig(m=64), 5, SmoothingPlan.EFFICIENT)
        ref = estimate_spectrum(series, cfg)
        for p in (2, 4):
            for partition in ("row_blocks", "point_blocks"):
                got = parallel_estimate(series, cfg, WorkerConfig(p=p, partition=partition))
                assert np.array_equal(ref.values, got.values), (p, partition)

    def test_materialized_plan_runs_serial_any_worker_count(self):
        series = generate_qpc(0.1, 0.15, 128, 0.4, seed=6)
        cfg = EstimationConfig(3, SegmentConfig(m=128), 5, SmoothingPlan.WS)
        ref = estimate_spectrum(series, cfg)
        got = parallel_estimate(series, cfg, WorkerConfig(p=4))
        assert np.array_equal(ref.values, got.values)

    def test_multi_segment_parallel(self):
        series = generate_qpc(0.1, 0.15, 512, 0.4, seed=7)
        cfg = EstimationConfig(3, SegmentConfig(m=128, k=4), 5, SmoothingPlan.FAST)
        ref = estimate_spectrum(series, cfg)
        got = parallel_estimate(series, cfg, WorkerConfig(p=3))
        assert np.array_equal(ref.values, got.values)


class TestParallelMemory:
    def test_worker_memory_sums_linearly(self):
        series = generate_qpc(0.1, 0.15, 512, 0.4, seed=8)
        cfg = EstimationConfig(3, SegmentConfig(m=512), 9, SmoothingPlan.EFFICIENT)
        single = measure_peak_memory(series, cfg, WorkerConfig(p=1))
        eight = measure_peak_memory(series, cfg, WorkerConfig(p=8))
        assert single > 0
        assert eight <= 8.5 * single
