"""Ground-state and heuristic solvers.

Reads are independent restarts with private random substreams derived
from (seed, read index), so results are identical whether reads run
sequentially or across threads.
"""

from __future__ import annotations

import math
import shlex
import subprocess
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..model import IsingModel, SampleRecord, SampleSet, ising_energies
from ..rng import derive_key
from ._backend import BACKEND, kernels

__all__ = [
    "BACKEND",
    "SaConfig",
    "SqaConfig",
    "AdapterError",
    "solve_exact",
    "simulated_annealing",
    "simulated_quantum_annealing",
    "external_solver",
    "default_beta_range",
]

EXACT_NODE_CAP = 24


class AdapterError(RuntimeError):
    """External solver violated the subprocess contract."""


@dataclass(frozen=True)
class SaConfig:
    """Simulated-annealing settings.

    When beta_hot/beta_cold are None they are derived from the model:
    the largest possible single-flip energy change is accepted with
    probability ~0.5 at beta_hot, the smallest nonzero change with ~0.01
    at beta_cold.
    """

    num_reads: int = 100
    sweeps: int = 1000
    beta_schedule: str = "geometric"
    beta_hot: float | None = None
    beta_cold: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.num_reads < 1 or self.sweeps < 1:
            raise ValueError("num_reads and sweeps must be positive")
        if self.beta_schedule not in ("geometric", "linear"):
            raise ValueError(f"unknown beta schedule {self.beta_schedule!r}")
        if self.beta_hot is not None and self.beta_hot <= 0:
            raise ValueError("beta_hot must be positive")
        if (
            self.beta_hot is not None
            and self.beta_cold is not None
            and not self.beta_hot < self.beta_cold
        ):
            raise ValueError("need beta_hot < beta_cold")


@dataclass(frozen=True)
class SqaConfig:
    """Simulated-quantum-annealing (path-integral Monte Carlo) settings.

    The transverse field decreases linearly from gamma_initial to
    gamma_final over the sweeps, mirroring the linear u(t) = t/T
    interpolation of annealing hardware.
    """

    num_reads: int = 50
    sweeps: int = 500
    trotter_slices: int = 32
    temperature: float = 0.05
    gamma_initial: float = 3.0
    gamma_final: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if min(self.num_reads, self.sweeps, self.trotter_slices) < 1:
            raise ValueError("num_reads, sweeps and trotter_slices must be positive")
        if self.temperature <= 0:
            raise ValueError("temperature must be positive")
        if not 0 < self.gamma_final < self.gamma_initial:
            raise ValueError("need 0 < gamma_final < gamma_initial")


def default_beta_range(model: IsingModel) -> tuple[float, float]:
    """(beta_hot, beta_cold) heuristic from the model's coefficients."""
    nonzero = [abs(v) for v in model.h.values() if v != 0.0]
    nonzero += [abs(v) for v in model.J.values() if v != 0.0]
    if not nonzero:
        return 0.1, 1.0
    per_node = np.zeros(model.num_nodes)
    for i, v in model.h.items():
        per_node[i] += abs(v)
    for (i, j), v in model.J.items():
        per_node[i] += abs(v)
        per_node[j] += abs(v)
    d_e_max = 2.0 * float(per_node.max())
    d_e_min = 2.0 * min(nonzero)
    beta_hot = math.log(2.0) / d_e_max
    beta_cold = math.log(100.0) / d_e_min
    if not beta_hot < beta_cold:
        beta_cold = beta_hot * (math.log(100.0) / math.log(2.0))
    return beta_hot, beta_cold


def _run_chunked(fn, keys: np.ndarray, threads: int) -> np.ndarray:
    """Run a kernel over contiguous read chunks; output is chunk-invariant."""
    threads = max(1, threads)
    if threads == 1 or len(keys) <= 1:
        return fn(keys)
    bounds = np.linspace(0, len(keys), threads + 1, dtype=int)
    chunks = [keys[a:b] for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts, axis=0)


def solve_exact(model: IsingModel, max_nodes: int = EXACT_NODE_CAP) -> SampleSet:
    """Exhaustive enumeration: all ground states and the exact minimum.

    Refuses models above `max_nodes` (default 24) since the state space
    doubles per node.
    """
    n = model.num_nodes
    if n > max_nodes:
        raise ValueError(f"exact solver refuses n={n} > cap {max_nodes}")
    if n == 0:
        return SampleSet(
            records=[SampleRecord(state=np.zeros(0, dtype=np.int8), energy=0.0)],
            solver_name="exact",
            solver_params={"max_nodes": max_nodes},
            seed=0,
        )
    best = math.inf
    best_states: list[np.ndarray] = []
    shifts = np.arange(n, dtype=np.uint64)
    chunk = 1 << 16
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.uint64)
        bits = ((idx[:, None] >> shifts) & np.uint64(1)).astype(np.float64)
        spins = 1.0 - 2.0 * bits
        energies = ising_energies(model, spins)
        lo = float(energies.min())
        if lo < best:
            best = lo
            best_states = []
        if lo <= best:
            for row in np.nonzero(energies == best)[0]:
                best_states.append(spins[row].astype(np.int8))
    records = [SampleRecord(state=s, energy=best) for s in best_states]
    return SampleSet(
        records=records,
        solver_name="exact",
        solver_params={"max_nodes": max_nodes},
        seed=0,
    )


def _beta_schedule(model: IsingModel, config: SaConfig) -> np.ndarray:
    hot = config.beta_hot
    cold = config.beta_cold
    if hot is None or cold is None:
        d_hot, d_cold = default_beta_range(model)
        hot = d_hot if hot is None else hot
        cold = d_cold if cold is None else cold
        if not hot < cold:
            raise ValueError(f"derived schedule has beta_hot={hot} >= beta_cold={cold}")
    if config.beta_schedule == "geometric":
        return np.geomspace(hot, cold, config.sweeps)
    return np.linspace(hot, cold, config.sweeps)


def simulated_annealing(
    model: IsingModel, config: SaConfig | None = None, threads: int = 1
) -> SampleSet:
    """Metropolis single-spin-flip annealing; one record per restart."""
    config = config or SaConfig()
    indptr, indices, weights = model.csr
    betas = _beta_schedule(model, config)
    keys = np.array(
        [derive_key(config.seed, "sa", r) for r in range(config.num_reads)],
        dtype=np.uint64,
    )
    h_vec = model.arrays[0]
    states = _run_chunked(
        lambda ks: kernels.sa_reads(indptr, indices, weights, h_vec, betas, ks),
        keys,
        threads,
    )
    energies = ising_energies(model, states)
    records = [
        SampleRecord(state=states[r].copy(), energy=float(energies[r]))
        for r in range(config.num_reads)
    ]
    params = {
        "num_reads": config.num_reads,
        "sweeps": config.sweeps,
        "beta_schedule": config.beta_schedule,
        "beta_hot": float(betas[0]),
        "beta_cold": float(betas[-1]),
    }
    return SampleSet(records=records, solver_name="sa", solver_params=params, seed=config.seed)


def _jperp_schedule(config: SqaConfig) -> np.ndarray:
    """Inter-slice coupling J_perp(gamma) = -(P*T/2) ln tanh(gamma / (P*T)).

    tanh underflows to 0 for tiny gamma/(P*T); the coupling is then clamped
    to the value at the smallest representable tanh, with a warning.
    """
    pt = config.trotter_slices * config.temperature
    gammas = np.linspace(config.gamma_initial, config.gamma_final, config.sweeps)
    th = np.tanh(gammas / pt)
    clamped = th <= 0.0
    if clamped.any():
        warnings.warn(
            f"tanh underflow for {int(clamped.sum())} sweep(s); inter-slice "
            "coupling clamped",
            stacklevel=3,
        )
        th = np.where(clamped, 5e-324, th)
    with np.errstate(divide="ignore"):
        return -(pt / 2.0) * np.log(th)


def simulated_quantum_annealing(
    model: IsingModel, config: SqaConfig | None = None, threads: int = 1
) -> SampleSet:
    """Path-integral Monte Carlo stand-in for hardware annealing.

    Each read returns its best Trotter slice at the end of the schedule.
    """
    config = config or SqaConfig()
    indptr, indices, weights = model.csr
    jperp = _jperp_schedule(config)
    keys = np.array(
        [derive_key(config.seed, "sqa", r) for r in range(config.num_reads)],
        dtype=np.uint64,
    )
    h_vec = model.arrays[0]
    p = config.trotter_slices
    states = _run_chunked(
        lambda ks: kernels.sqa_reads(
            indptr,
            indices,
            weights,
            h_vec,
            jperp,
            1.0 / p,
            1.0 / config.temperature,
            p,
            ks,
        ),
        keys,
        threads,
    )
    n = model.num_nodes
    flat = states.reshape(config.num_reads * p, n)
    energies = ising_energies(model, flat).reshape(config.num_reads, p)
    best_slice = energies.argmin(axis=1)
    records = [
        SampleRecord(
            state=states[r, best_slice[r]].copy(),
            energy=float(energies[r, best_slice[r]]),
        )
        for r in range(config.num_reads)
    ]
    params = {
        "num_reads": config.num_reads,
        "sweeps": config.sweeps,
        "trotter_slices": config.trotter_slices,
        "temperature": config.temperature,
        "gamma_initial": config.gamma_initial,
        "gamma_final": config.gamma_final,
    }
    return SampleSet(records=records, solver_name="sqa", solver_params=params, seed=config.seed)


def external_solver(
    model: IsingModel,
    command: str | list[str],
    timeout: float | None = None,
    energy_tol: float = 1e-6,
) -> SampleSet:
    """Run a subprocess solver: instance JSON on stdin, samples JSON on stdout.

    The returned records are invariant-checked and every energy is
    re-verified against the model within `energy_tol`.
    """
    from ..serialize import FormatError, instance_to_json, sample_set_from_json

    argv = shlex.split(command) if isinstance(command, str) else list(command)
    try:
        proc = subprocess.run(
            argv,
            input=instance_to_json(model).encode("utf-8"),
            capture_output=True,
            timeout=timeout,
        )
    except FileNotFoundError as exc:
        raise AdapterError(f"cannot execute {argv[0]!r}: {exc}") from exc
    if proc.returncode != 0:
        stderr = proc.stderr.decode("utf-8", "replace").strip()
        raise AdapterError(f"solver exited with code {proc.returncode}: {stderr[:500]}")
    try:
        samples = sample_set_from_json(proc.stdout.decode("utf-8"))
    except (ValueError, KeyError, FormatError) as exc:
        raise AdapterError(f"malformed solver output: {exc}") from exc
    n = model.num_nodes
    for k, rec in enumerate(samples.records):
        if rec.state.shape != (n,) or not np.all(np.abs(rec.state) == 1):
            raise AdapterError(f"record {k}: state is not a length-{n} spin vector")
    recomputed = ising_energies(model, np.array([r.state for r in samples.records]))
    for k, rec in enumerate(samples.records):
        dev = abs(recomputed[k] - rec.energy)
        if dev > energy_tol:
            raise AdapterError(
                f"record {k}: reported energy {rec.energy} deviates from "
                f"recomputed {recomputed[k]} by {dev:g} (tol {energy_tol:g})"
            )
    return samples
