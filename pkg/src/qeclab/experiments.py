"""
Monte Carlo experiments.

Each experiment walks a grid of (N, depth, erasure point), runs independent
trials whose seeds are derived from the master seed and the trial
coordinates, and aggregates per-trial observables into ResultRecords.
Results do not depend on the number of worker threads.
"""

import logging
import math
from collections import defaultdict
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple

import numpy as np
from joblib import Parallel, delayed
from scipy.stats import binom
from tqdm import tqdm

from qeclab import analytics
from qeclab.circuits import GateEnsemble, Geometry, apply_random_circuit
from qeclab.config import ExperimentConfig
from qeclab.erasure import ErasureKind, ErasureModel, probe_failures, recovery_probability, sample_erasure
from qeclab.exceptions import InvalidArgumentError, NoCrossingError, SingularFitError
from qeclab.expurgation import MeasurementOrder, StopCriteria, run_expurgation
from qeclab.haar import haar_erasure_trial
from qeclab.misc import child_seed, make_rng, timer_context
from qeclab.records import ResultRecord
from qeclab.stabilizer import SubsystemCode, spread_logical_sites, trivial_code
from qeclab.stats import ScalingFit, ScalingModel, fit_scaling, interpolate_dstar, summarize

logger = logging.getLogger(__name__)


class SweepPoint(NamedTuple):
    name: str
    value: float
    model: Optional[ErasureModel]


_DIMENSION = {"chain1d": 1, "blocks": 1, "grid2d": 2, "all2all": 0}


def build_code(config: ExperimentConfig, n_qubits: int, depth: int, rng: np.random.Generator) -> SubsystemCode:
    """Trivial code at the configured rate, encoded by a random circuit of ``depth`` layers."""
    k = config.logical_count(n_qubits)
    code = trivial_code(n_qubits, spread_logical_sites(n_qubits, k))
    if depth:
        geometry = Geometry.build(config.geometry, n_qubits, config.block_size)
        apply_random_circuit(code, geometry, GateEnsemble(config.gate_ensemble), depth, rng)
    return code


def rmt_recovery_for(model: ErasureModel, n_qubits: int, n_s: int) -> float:
    """RMT recovery averaged over the erasure count distribution of ``model``."""
    if model.kind is ErasureKind.FIXED:
        return analytics.rmt_recovery(model.n_erased, n_s)
    if model.kind is ErasureKind.REGULAR:
        return analytics.rmt_recovery(n_qubits // model.spacing, n_s)
    counts = np.arange(n_qubits + 1)
    weights = binom.pmf(counts, n_qubits, model.probability)
    return math.fsum(w * analytics.rmt_recovery(int(c), n_s) for c, w in zip(counts, weights) if w > 0)


class Experiment:
    """
    Base experiment: grid walk, seeded parallel trials and aggregation.

    Subclasses define :meth:`trial` and may add analytic or derived records.
    """

    name = ""

    def __init__(self, config: ExperimentConfig, progress: bool = False):
        """
        Initialize an experiment.

        Args:
            config: validated experiment configuration
            progress: show a progress bar over sweep points
        """
        self.config = config
        self.progress = progress

    # -- grid -----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return _DIMENSION[self.config.geometry]

    def n_stabilizers(self, n_qubits: int) -> int:
        return n_qubits - self.config.logical_count(n_qubits)

    def depths(self, n_qubits: int) -> List[Optional[int]]:
        return self.config.depths_for(n_qubits)

    def points(self, n_qubits: int) -> List[SweepPoint]:
        """Erasure points from the config's error model."""
        c = self.config
        n_s = self.n_stabilizers(n_qubits)
        e_c = analytics.capacity_erasure_rate(c.rate)
        if c.error_model == "regular":
            return [SweepPoint("spacing", c.spacing, ErasureModel.regular(c.spacing))]
        if c.error_model == "iid":
            return [SweepPoint("e", e, ErasureModel.iid(e)) for e in (c.erasure_fractions or (e_c,))]
        if c.deltas:
            return [SweepPoint("delta", d, ErasureModel.fixed_from_delta(d, n_s)) for d in c.deltas
                    if 0 <= (n_s + d) // 2 <= n_qubits]
        fractions = c.erasure_fractions or (e_c,)
        return [SweepPoint("e", e, ErasureModel.fixed(int(round(e * n_qubits)))) for e in fractions]

    def grid(self) -> Iterator[Tuple[int, Optional[int], SweepPoint]]:
        for n in self.config.sizes:
            for depth in self.depths(n):
                for point in self.points(n):
                    yield n, depth, point

    def n_runs(self) -> int:
        return self.config.trials

    def seed_for(self, n: int, depth, point: SweepPoint, trial: int) -> int:
        return child_seed(self.config.master_seed, self.name, n, depth, point.name, point.value, trial)

    # -- trials ---------------------------------------------------------

    def trial(self, n: int, depth, point: SweepPoint, seed: int) -> Dict[str, float]:
        raise NotImplementedError

    def record(self, n, depth, point, statistic, value, stderr=0.0, trials=1, seed=None, capped=False):
        return ResultRecord(self.name, n, self.dimension, depth, point.name, point.value,
                            statistic, float(value), float(stderr), trials, seed, capped)

    def run_point(self, n: int, depth, point: SweepPoint) -> Tuple[List[ResultRecord], List[ResultRecord]]:
        """Aggregate records and, with ``raw`` set, one record per trial."""
        c = self.config
        seeds = [self.seed_for(n, depth, point, t) for t in range(self.n_runs())]
        with timer_context(f"{self.name} N={n} depth={depth} {point.name}={point.value:g}"):
            results = Parallel(n_jobs=c.threads)(delayed(self.trial)(n, depth, point, s) for s in seeds)
        # an aggregate row carries a seed only when it is a single replayable trial
        point_seed = seeds[0] if len(seeds) == 1 else None
        records, raw = [], []
        for key in results[0]:
            stats = summarize([r[key] for r in results])
            records.append(self.record(n, depth, point, key, stats.mean, stats.stderr, stats.count, point_seed))
            if c.raw:
                raw.extend(self.record(n, depth, point, key, r[key], 0.0, 1, s)
                           for r, s in zip(results, seeds))
        records.extend(self.derived(n, depth, point, results))
        return records, raw

    def derived(self, n, depth, point, results) -> List[ResultRecord]:
        """Analytic or composite records for one sweep point."""
        return []

    def finalize(self, records: List[ResultRecord]) -> List[ResultRecord]:
        """Records computed across sweep points (e.g. d*)."""
        return []

    def run(self) -> List[ResultRecord]:
        records, raw = [], []
        grid = list(self.grid())
        for n, depth, point in tqdm(grid, desc=self.name, disable=not self.progress):
            aggregate, per_trial = self.run_point(n, depth, point)
            records.extend(aggregate)
            raw.extend(per_trial)
        records.extend(self.finalize(records))
        logger.info("%s: %d records, %d raw", self.name, len(records), len(raw))
        return records + raw

    def find_point(self, n: int, value: float) -> SweepPoint:
        for p in self.points(n):
            if math.isclose(p.value, value, rel_tol=1e-8, abs_tol=1e-12):
                return p
        raise InvalidArgumentError(f"no sweep point with value {value} for N={n}")


def _dstar_records(exp: Experiment, records: List[ResultRecord], statistic: str, out_name: str,
                   strict: bool = False) -> List[ResultRecord]:
    series = defaultdict(list)
    for r in records:
        if r.statistic == statistic:
            series[(r.n_qubits, r.point_name, r.point)].append((r.depth, r.value))
    out = []
    last_error = None
    for (n, name, value), pts in sorted(series.items()):
        pts.sort()
        depths, values = zip(*pts)
        try:
            d = interpolate_dstar(depths, values, exp.config.target)
        except NoCrossingError as err:
            logger.warning("N=%d %s=%g: %s", n, name, value, err)
            last_error = err
            continue
        out.append(ResultRecord(exp.name, n, exp.dimension, None, name, value, out_name, d, 0.0, len(depths)))
    if strict and not out and last_error is not None:
        raise last_error
    return out


def scaling_fit_records(exp: Experiment, records: List[ResultRecord], statistic: str) -> List[ResultRecord]:
    """
    Fit d*(N) against every scaling model for each erasure point.

    Needs d* at three or more sizes. Each fit emits slope, intercept, residual
    and r_squared as ``<statistic>_<model>_<field>`` records whose N column
    holds the largest size in the fit.
    """
    series = defaultdict(dict)
    for r in records:
        if r.statistic == statistic:
            series[(r.point_name, r.point)][r.n_qubits] = r.value
    out = []
    for (name, value), by_size in sorted(series.items()):
        if len(by_size) < 3:
            continue
        sizes = sorted(by_size)
        ys = [by_size[n] for n in sizes]
        for model in ScalingModel:
            try:
                fit = fit_scaling(sizes, ys, model)
            except SingularFitError as err:
                logger.warning("%s %s=%g: %s", statistic, name, value, err)
                continue
            out.extend(
                ResultRecord(exp.name, sizes[-1], exp.dimension, None, name, value,
                             f"{statistic}_{model.value}_{field}", getattr(fit, field), 0.0, len(sizes))
                for field in ScalingFit._fields
            )
    return out


class DecodeExperiment(Experiment):
    """Random encoding, one erasure, optimal decoding; compared with RMT."""

    name = "rmt-sweep"

    def trial(self, n, depth, point, seed):
        rng = make_rng(seed)
        code = build_code(self.config, n, depth, rng)
        pattern = sample_erasure(point.model, n, rng)
        rec = recovery_probability(code, pattern)
        return {
            "failure_flag": float(rec.r_m > 0),
            "failure_mass": 1.0 - rec.probability,
            "r_m": float(rec.r_m),
            "coherent_information": float(rec.coherent_information),
        }

    def derived(self, n, depth, point, results):
        p = rmt_recovery_for(point.model, n, self.n_stabilizers(n))
        return [self.record(n, depth, point, "p_recover_rmt", p),
                self.record(n, depth, point, "p_fail_rmt", 1.0 - p)]


class DepthSweepExperiment(DecodeExperiment):
    name = "depth-sweep"

    def finalize(self, records):
        dstar = (_dstar_records(self, records, "failure_flag", "dstar")
                 + _dstar_records(self, records, "failure_mass", "dstar_mass"))
        return (dstar + scaling_fit_records(self, dstar, "dstar")
                + scaling_fit_records(self, dstar, "dstar_mass"))


class RegularErasureExperiment(DepthSweepExperiment):
    name = "regular-erasure"

    def points(self, n_qubits):
        s = self.config.spacing
        return [SweepPoint("spacing", s, ErasureModel.regular(s))]


class BlockModelExperiment(DecodeExperiment):
    """Deep circuits on independent blocks against the block-model predictions."""

    name = "block-model"

    def depths(self, n_qubits):
        if self.config.depths:
            return list(self.config.depths)
        return [int(round(self.config.depth_factor * self.config.block_size))]

    def derived(self, n, depth, point, results):
        c = self.config
        records = super().derived(n, depth, point, results)
        if point.model.kind is not ErasureKind.IID or not 0.0 < point.model.probability < 1.0:
            return records
        params = analytics.BlockModelParams(n, c.block_size, point.model.probability, c.rate)
        records.append(self.record(n, depth, point, "p_fail_block_rmt",
                                   1.0 - analytics.block_model_recovery_rmt(params)))
        if params.erasure_rate < params.critical_rate:
            records.append(self.record(n, depth, point, "p_fail_block_model",
                                       analytics.block_model_failure(params)))
        return records


def probe_partner(n_qubits: int, k: int, distance: int) -> int:
    """Logical pair whose site lies closest to ``distance`` sites from pair 0 on the ring."""
    if k < 2:
        raise InvalidArgumentError(f"two probes need k >= 2, got {k}")
    sites = spread_logical_sites(n_qubits, k)
    ring = [min(abs(s - sites[0]), n_qubits - abs(s - sites[0])) for s in sites]
    return int(np.argmin([abs(r - distance) if j else n_qubits for j, r in enumerate(ring)]))


class ProbeExperiment(Experiment):
    """Joint and conditional failure of two reference probes at distance x."""

    name = "probes"

    def points(self, n_qubits):
        base = super().points(n_qubits)
        if not base:
            raise InvalidArgumentError(f"no erasure point for N={n_qubits}")
        erasure = base[0].model
        return [SweepPoint("x", x, erasure) for x in (self.config.probe_distances or (n_qubits // 2,))]

    def trial(self, n, depth, point, seed):
        rng = make_rng(seed)
        code = build_code(self.config, n, depth, rng)
        pattern = sample_erasure(point.model, n, rng)
        partner = probe_partner(n, code.n_logical, int(point.value))
        report = probe_failures(code, pattern, [0, partner])
        f1, f2 = bool(report.flags[0]), bool(report.flags[1])
        return {
            "p1": float(f1),
            "p2": float(f2),
            "p12": float(report.joint_flag),
            "p_both": float(f1 and f2),
            "d1": float(report.d[0]),
        }

    def derived(self, n, depth, point, results):
        count1 = sum(r["p1"] for r in results)
        p1 = count1 / len(results)
        out = [self.record(n, depth, point, "p1_squared", p1 * p1, 0.0, len(results))]
        if count1 > 0:
            cond = sum(r["p_both"] for r in results) / count1
            se = math.sqrt(cond * (1.0 - cond) / count1)
            out.append(self.record(n, depth, point, "p2_given_1", cond, se, int(count1)))
        return out


class ExpurgationExperiment(Experiment):
    """Failure before and after expurgation, and the depth d* reaching the target failure."""

    name = "expurgate-dstar"

    def points(self, n_qubits):
        f = self.config.expurgation_fraction
        return [SweepPoint("e", f, ErasureModel.fixed(int(round(f * n_qubits))))]

    def trial(self, n, depth, point, seed):
        c = self.config
        rng = make_rng(seed)
        code = build_code(c, n, depth, rng)
        before = recovery_probability(code, sample_erasure(point.model, n, rng))
        stop = StopCriteria.with_budget(
            code.n_logical, n, c.expurgation_budget_offset,
            min_rate=c.expurgation_stop_rate,
            max_failure=c.expurgation_stop_failure,
            max_rounds=c.expurgation_rounds,
        )
        code, trace = run_expurgation(code, point.model, c.expurgation_mode, stop, rng,
                                      MeasurementOrder(c.measurement_order))
        after = recovery_probability(code, sample_erasure(point.model, n, rng))
        return {
            "failure_pre": float(before.r_m > 0),
            "failure_post": 1.0 if trace.failed else float(after.r_m > 0),
            "rate_post": code.rate,
            "rounds": float(len(trace)),
            "expurgation_failed": float(trace.failed),
        }

    def finalize(self, records):
        dstar = (_dstar_records(self, records, "failure_pre", "dstar_pre")
                 + _dstar_records(self, records, "failure_post", "dstar_post", strict=True))
        return (dstar + scaling_fit_records(self, dstar, "dstar_pre")
                + scaling_fit_records(self, dstar, "dstar_post"))


class HaarExperiment(Experiment):
    """Coherent information of Haar-random encodings."""

    name = "haar"

    def depths(self, n_qubits):
        return [self.config.haar_depth]

    def trial(self, n, depth, point, seed):
        c = self.config
        rng = make_rng(seed)
        pattern = sample_erasure(point.model, n, rng)
        res = haar_erasure_trial(n, c.logical_count(n), pattern, rng, c.haar_mode, depth, seed)
        return {"i_c": res.i_c, "i_re": res.i_re, "n_e": float(res.n_e)}


class SelfAveragingExperiment(Experiment):
    """Spread over random codes of the per-code recovery probability at criticality."""

    name = "self-averaging"

    def points(self, n_qubits):
        return [SweepPoint("delta", 0, ErasureModel.fixed_from_delta(0, self.n_stabilizers(n_qubits)))]

    def n_runs(self):
        return self.config.codes

    def trial(self, n, depth, point, seed):
        rng = make_rng(seed)
        code = build_code(self.config, n, depth, rng)
        p = [recovery_probability(code, sample_erasure(point.model, n, rng)).probability
             for _ in range(self.config.trials)]
        return {"recovery": float(np.mean(p))}

    def derived(self, n, depth, point, results):
        values = np.array([r["recovery"] for r in results])
        std = float(values.std(ddof=1)) if values.size > 1 else 0.0
        return [self.record(n, depth, point, "recovery_std", std, 0.0, values.size),
                self.record(n, depth, point, "r_c", analytics.critical_recovery_constant())]


class PredictExperiment(Experiment):
    """Analytic predictions only; no trials."""

    name = "predict"

    def depths(self, n_qubits):
        return [None]

    def run_point(self, n, depth, point):
        c = self.config
        n_s = self.n_stabilizers(n)
        rec = lambda stat, value: self.record(n, depth, point, stat, value)
        model = point.model
        if model.kind is ErasureKind.IID:
            e = model.probability
            out = [rec("neg_log2_failure_exact", analytics.iid_failure_exact(n, n_s, e)),
                   rec("p_recover_rmt", rmt_recovery_for(model, n, n_s))]
            if 0.0 < e < 1.0:
                x = (e - analytics.capacity_erasure_rate(c.rate)) * math.sqrt(n) / math.sqrt(e * (1.0 - e))
                out += [rec("x", x), rec("neg_log2_failure_scaling", math.sqrt(n) * analytics.iid_scaling(x, e))]
            return out, []
        n_e = model.n_erased if model.kind is ErasureKind.FIXED else n // model.spacing
        delta = 2 * n_e - n_s
        return [
            rec("n_e", n_e),
            rec("n_s", n_s),
            rec("p_recover_rmt", analytics.rmt_recovery(n_e, n_s)),
            rec("p_fail_rmt", analytics.rmt_failure(n_e, n_s)),
            rec("p_fail_asymptotic", analytics.rmt_failure_asymptotic(delta)),
            rec("rank_excess_rmt", analytics.rmt_mean_rank_excess(n_e, n_s)),
            rec("ising_surface", analytics.ising_surface_estimate(n_e, n_s, c.rate, n)),
        ], []


EXPERIMENT_TYPES = {
    cls.name: cls
    for cls in (
        DecodeExperiment, DepthSweepExperiment, RegularErasureExperiment, ProbeExperiment,
        ExpurgationExperiment, HaarExperiment, SelfAveragingExperiment, PredictExperiment,
        BlockModelExperiment,
    )
}


def make_experiment(config: ExperimentConfig, progress: bool = False) -> Experiment:
    return EXPERIMENT_TYPES[config.experiment](config, progress)


def run_experiment(config: ExperimentConfig, progress: bool = False) -> List[ResultRecord]:
    """Run every sweep point of ``config`` and return its records."""
    return make_experiment(config, progress).run()


def replay_trial(config: ExperimentConfig, n_qubits: int, depth: Optional[int], point_value: float,
                 seed: int) -> Dict[str, float]:
    """Recompute one trial's observables from its recorded seed."""
    exp = make_experiment(config)
    if isinstance(exp, PredictExperiment):
        raise InvalidArgumentError("predict records have no trials to replay")
    return exp.trial(n_qubits, depth, exp.find_point(n_qubits, point_value), seed)
