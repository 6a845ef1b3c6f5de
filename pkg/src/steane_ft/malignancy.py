"""Exhaustive benign/malignant classification of location pairs.

A pair is malignant when some assignment of Pauli faults at the two
locations (together with admissible input errors and adversarial
rotation companions) makes every ancilla verification pass while the
rectangle's logical action is wrong.  Scenarios that reject an ancilla
never count; the Bayes acceptance adjustment in the threshold pipeline
compensates for the conditioning.

The sweep is sector-decoupled: X and Z components propagate
independently through these CSS gadgets, coupling only through the
crossing masks at rotation locations, so each CSS sector is quantified
separately and recombined per Pauli combination.  Work shards over
contiguous pair ranges and merges by addition, so counts are identical
for any worker count.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from multiprocessing import get_context

import numpy as np

from . import propagate
from .circuit import Gadget, LocationType
from .engine import (
    FLIPS,
    OUT_Z,
    TCROSS,
    ZERO_CONS,
    Engine,
    location_alphabet,
    pauli_weight_share,
    xor_cons,
)

_TYPES = list(LocationType)


def _sector_label(nargs: int, mask: int, sector: str) -> str:
    ch = "X" if sector == "x" else "Z"
    return "".join(ch if (mask >> k) & 1 else "I" for k in range(nargs))


def _merge_labels(a: str, b: str) -> str:
    out = []
    for ca, cb in zip(a, b):
        both = {ca, cb} - {"I"}
        out.append("I" if not both else (both.pop() if len(both) == 1 else "Y"))
    return "".join(out)


def _mask_index(args) -> int:
    idx = 0
    for k, bit in enumerate(args):
        idx |= bit << k
    return idx


@dataclass
class MalignancyReport:
    gadget: str
    noise_mode: str
    include_storage: bool
    pruned: bool
    census: dict[int, int]
    matrix: list[list]          # 8x8 lower-triangular; ints or Fractions
    B: int
    witnesses: dict[str, dict] = field(default_factory=dict)
    location_count: int = 0

    @property
    def A(self):
        return sum(v for row in self.matrix for v in row)

    def matrix_floats(self) -> list[list[float]]:
        return [[float(v) for v in row] for row in self.matrix]

    def to_json(self) -> str:
        doc = {
            "schema_version": 1,
            "gadget": self.gadget,
            "noise_mode": self.noise_mode,
            "include_storage": self.include_storage,
            "pruned": self.pruned,
            "location_count": self.location_count,
            "census": {str(k): v for k, v in self.census.items()},
            "matrix": [[str(v) if isinstance(v, Fraction) else v for v in row]
                       for row in self.matrix],
            "A": float(self.A),
            "A_exact": str(self.A),
            "B": self.B,
            "witnesses": self.witnesses,
        }
        return json.dumps(doc, indent=1, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "MalignancyReport":
        doc = json.loads(text)

        def cell(v):
            return Fraction(v) if isinstance(v, str) else v

        return cls(
            gadget=doc["gadget"],
            noise_mode=doc["noise_mode"],
            include_storage=doc["include_storage"],
            pruned=doc["pruned"],
            census={int(k): v for k, v in doc["census"].items()},
            matrix=[[cell(v) for v in row] for row in doc["matrix"]],
            B=doc["B"],
            witnesses={k: _witness_from_json(w) for k, w in doc.get("witnesses", {}).items()},
            location_count=doc.get("location_count", 0),
        )

    def to_csv(self) -> str:
        header = "," + ",".join(t.name for t in _TYPES)
        lines = [header]
        for i, t in enumerate(_TYPES):
            cells = []
            for j in range(i + 1):
                v = self.matrix[i][j]
                cells.append(f"{float(v):.1f}" if self.noise_mode == "depolarizing" else str(v))
            lines.append(t.name + "," + ",".join(cells))
        return "\n".join(lines) + "\n"


def _witness_from_json(w: dict) -> dict:
    return {
        "faults": {int(k): v for k, v in w.get("faults", {}).items()},
        "inputs": dict(w.get("inputs", {})),
        "t_bits": {int(k): v for k, v in w.get("t_bits", {}).items()},
    }


def witness_scenario(witness: dict) -> propagate.FaultScenario:
    return propagate.FaultScenario(
        faults={int(k): v for k, v in witness["faults"].items()},
        input_errors={b: propagate.PauliOp.from_label(p)
                      for b, p in witness.get("inputs", {}).items()},
        t_bits={int(k): v for k, v in witness.get("t_bits", {}).items()},
    )


# --- pair classification ------------------------------------------------------


class _PairSweep:
    """Shared state for classifying the pairs of one gadget."""

    def __init__(self, gadget: Gadget, pruned: bool = True):
        self.gadget = gadget
        self.engine = Engine(gadget)
        self.pruned = pruned
        self.kind = gadget.meta["kind"]
        self.locs = gadget.locations
        self.lead_prefix: dict[int, str] = {}
        if self.kind == "cnot_exrec":
            for loc in self.locs:
                for pfx in gadget.meta["leading_prefixes"]:
                    if loc.path.startswith(pfx):
                        self.lead_prefix[loc.id] = pfx
                        break

    # -- input-error quantification

    def _input_options(self, sector: str, blocks: tuple[str, ...]) -> list[tuple]:
        """Consequences of every admissible input pattern (weight <= 1
        per sector per block) of the given blocks, trivial first."""
        options = [ZERO_CONS]
        for block in blocks:
            grown = []
            for base in options:
                grown.append(base)
                for pos in range(7):
                    grown.append(xor_cons(base, self.engine.input_elem[(block, sector, pos)]))
            options = grown
        return options

    def _input_patterns(self, sector: str, blocks: tuple[str, ...]) -> list[dict]:
        """Pauli-literal form of _input_options, index-aligned with it."""
        options: list[dict] = [{}]
        for block in blocks:
            grown = []
            for base in options:
                grown.append(base)
                for pos in range(7):
                    lab = ["I"] * 7
                    lab[pos] = "X" if sector == "x" else "Z"
                    pat = dict(base)
                    pat[block] = "".join(lab)
                    grown.append(pat)
            options = grown
        return options

    def _swept_blocks(self, li, lj) -> tuple[str, ...]:
        """Blocks whose input errors can matter: only those whose leading
        EC contains one of the fault locations.  A fault-free leading EC
        cancels its block's input exactly (the record and the frame pick
        up identical contributions), so other inputs are provably inert."""
        if self.pruned or self.kind != "cnot_exrec":
            return ()
        blocks = set()
        for loc in (li, lj):
            pfx = self.lead_prefix.get(loc.id)
            if pfx == "lead_ec_ctl":
                blocks.add("ctl")
            elif pfx == "lead_ec_tgt":
                blocks.add("tgt")
        return tuple(sorted(blocks))

    # -- CNOT exRec

    def _cnot_sector_table(self, sector: str, li, lj, blocks):
        """(ix, jx) -> (acceptable, index of a failing input or -1)."""
        eng = self.engine
        parts_i = eng.sector_parts(li.id, sector)
        parts_j = eng.sector_parts(lj.id, sector)
        inputs = self._input_options(sector, blocks)
        table = {}
        for ix, ci in enumerate(parts_i):
            for jx, cj in enumerate(parts_j):
                base = xor_cons(ci, cj)
                acc_any = False
                caf_idx = -1
                for n, inp in enumerate(inputs):
                    acc, fail = eng.eval_cnot_sector(sector, xor_cons(base, inp))
                    if acc:
                        acc_any = True
                        if fail:
                            caf_idx = n
                            break
                table[(ix, jx)] = (acc_any, caf_idx)
        return table

    def classify_cnot(self, li, lj, mode: str):
        if self.pruned:
            pi = self.lead_prefix.get(li.id)
            if pi is not None and pi == self.lead_prefix.get(lj.id):
                return (False, None) if mode == "adversarial" else (Fraction(0), None)
        blocks = self._swept_blocks(li, lj)
        tab_x = self._cnot_sector_table("x", li, lj, blocks)
        tab_z = self._cnot_sector_table("z", li, lj, blocks)
        if mode == "adversarial":
            for sector, tab in (("x", tab_x), ("z", tab_z)):
                for (im, jm), (_, caf) in tab.items():
                    if caf >= 0:
                        return True, self._witness_cnot(li, lj, sector, im, jm, blocks, caf)
            return False, None
        mass = Fraction(0)
        share = pauli_weight_share(li.ltype) * pauli_weight_share(lj.ltype)
        witness = None
        for _, xi, zi in location_alphabet(li.ltype):
            ix, iz = _mask_index(xi), _mask_index(zi)
            for _, xj, zj in location_alphabet(lj.ltype):
                jx, jz = _mask_index(xj), _mask_index(zj)
                acc_x, caf_x = tab_x[(ix, jx)]
                acc_z, caf_z = tab_z[(iz, jz)]
                if (caf_x >= 0 and acc_z) or (caf_z >= 0 and acc_x):
                    mass += share
                    if witness is None:
                        if caf_x >= 0 and acc_z:
                            witness = self._witness_cnot(li, lj, "x", ix, jx, blocks, caf_x)
                        else:
                            witness = self._witness_cnot(li, lj, "z", iz, jz, blocks, caf_z)
        return mass, witness

    def _witness_cnot(self, li, lj, sector, im, jm, blocks, input_idx) -> dict:
        faults = {}
        for loc, mask in ((li, im), (lj, jm)):
            lab = _sector_label(len(loc.qubits), mask, sector)
            if lab.strip("I"):
                faults[loc.id] = lab
        inputs = self._input_patterns(sector, blocks)[input_idx] if input_idx > 0 else {}
        return {"faults": faults, "inputs": inputs, "t_bits": {}}

    # -- preparation exRec

    def classify_astate(self, li, lj, mode: str):
        eng = self.engine
        xp_i = eng.sector_parts(li.id, "x")
        xp_j = eng.sector_parts(lj.id, "x")
        zp_i = eng.sector_parts(li.id, "z")
        zp_j = eng.sector_parts(lj.id, "z")
        zcache: dict[tuple, tuple] = {}

        def z_probe(crossings: int, x_failed: bool):
            """First (iz, jz, bits) making an accepted failure, or None."""
            for iz in range(len(zp_i)):
                for jz in range(len(zp_j)):
                    key = (crossings, x_failed, iz, jz)
                    hit = zcache.get(key)
                    if hit is None:
                        hit = eng.eval_astate_z(
                            xor_cons(zp_i[iz], zp_j[jz]), crossings, x_failed,
                            want_solution=True)
                        zcache[key] = hit
                    ok, bits = hit
                    if ok:
                        return iz, jz, bits
            return None

        if mode == "adversarial":
            for ix, ci in enumerate(xp_i):
                for jx, cj in enumerate(xp_j):
                    cons = xor_cons(ci, cj)
                    acc, failed = eng.eval_astate_x(cons)
                    if not acc:
                        continue
                    probe = z_probe(cons[TCROSS], failed)
                    if probe is not None:
                        iz, jz, bits = probe
                        return True, self._witness_astate(li, lj, ix, jx, iz, jz, bits)
            return False, None
        mass = Fraction(0)
        share = pauli_weight_share(li.ltype) * pauli_weight_share(lj.ltype)
        witness = None
        for _, xi, zi in location_alphabet(li.ltype):
            for _, xj, zj in location_alphabet(lj.ltype):
                cons = xor_cons(xp_i[_mask_index(xi)], xp_j[_mask_index(xj)])
                acc, failed = eng.eval_astate_x(cons)
                if not acc:
                    continue
                zc = xor_cons(zp_i[_mask_index(zi)], zp_j[_mask_index(zj)])
                ok, bits = eng.eval_astate_z(zc, cons[TCROSS], failed, want_solution=True)
                if ok:
                    mass += share
                    if witness is None:
                        witness = self._witness_astate(
                            li, lj, _mask_index(xi), _mask_index(xj),
                            _mask_index(zi), _mask_index(zj), bits)
        return mass, witness

    def _witness_astate(self, li, lj, ix, jx, iz, jz, t_bits) -> dict:
        faults = {}
        for loc, mx, mz in ((li, ix, iz), (lj, jx, jz)):
            lab = _merge_labels(
                _sector_label(len(loc.qubits), mx, "x"),
                _sector_label(len(loc.qubits), mz, "z"))
            if lab.strip("I"):
                faults[loc.id] = lab
        return {"faults": faults, "inputs": {},
                "t_bits": {t: b for t, b in t_bits.items() if b}}

    def classify(self, li, lj, mode: str):
        if self.kind == "cnot_exrec":
            return self.classify_cnot(li, lj, mode)
        return self.classify_astate(li, lj, mode)


def classify_pair(gadget: Gadget, loc_i: int, loc_j: int, mode: str = "adversarial",
                  pruned: bool = True):
    """Classify one unordered pair of location ids.

    Returns ``"malignant"``/``"benign"`` in adversarial mode, or the
    weighted failure mass (a Fraction) in depolarizing mode.
    """
    if loc_i == loc_j:
        raise ValueError("a pair needs two distinct locations")
    sweep = _sweeper(gadget, pruned)
    li, lj = gadget.locations[loc_i], gadget.locations[loc_j]
    result, _ = sweep.classify(li, lj, mode)
    if mode == "adversarial":
        return "malignant" if result else "benign"
    return result


# --- full matrix -----------------------------------------------------------------

_SWEEPERS: dict[tuple, _PairSweep] = {}


def _sweeper(gadget: Gadget, pruned: bool) -> _PairSweep:
    key = (gadget.name, pruned)
    sweep = _SWEEPERS.get(key)
    if sweep is None or sweep.gadget is not gadget and sweep.gadget.netlist() != gadget.netlist():
        sweep = _PairSweep(gadget, pruned=pruned)
        _SWEEPERS[key] = sweep
    return sweep


def _unflatten(flat: int, n: int) -> tuple[int, int]:
    # row-major enumeration of i < j pairs
    i = 0
    span = n - 1
    while flat >= span:
        flat -= span
        i += 1
        span -= 1
    return i, i + 1 + flat


def _sweep_range(args):
    gadget, mode, pruned, lo, hi, keep_witnesses = args
    sweep = _sweeper(gadget, pruned)
    locs = gadget.locations
    n = len(locs)
    zero = Fraction(0) if mode == "depolarizing" else 0
    matrix = [[zero for _ in range(8)] for _ in range(8)]
    witnesses = {}
    for flat in range(lo, hi):
        i, j = _unflatten(flat, n)
        li, lj = locs[i], locs[j]
        result, wit = sweep.classify(li, lj, mode)
        value = (1 if result else 0) if mode == "adversarial" else result
        if value:
            a, b = sorted((int(li.ltype), int(lj.ltype)), reverse=True)
            matrix[a - 1][b - 1] += value
            if keep_witnesses and wit is not None:
                witnesses[f"{i},{j}"] = wit
    return matrix, witnesses


def count_matrix(gadget: Gadget, mode: str = "adversarial", pruned: bool = True,
                 workers: int = 1, keep_witnesses: bool = True,
                 progress=None) -> MalignancyReport:
    """Classify every unordered pair of locations in the gadget.

    Deterministic for any ``workers`` value: shards are contiguous pair
    ranges and merging is addition, with witnesses keyed per pair.
    """
    if mode not in ("adversarial", "depolarizing"):
        raise ValueError(f"unknown noise mode {mode!r}")
    n = gadget.location_count
    total = n * (n - 1) // 2
    chunk = total if workers <= 1 else max(1, total // (workers * 8))
    jobs = []
    lo = 0
    while lo < total:
        hi = min(lo + chunk, total)
        jobs.append((gadget, mode, pruned, lo, hi, keep_witnesses))
        lo = hi
    results = []
    if workers <= 1:
        for job in jobs:
            results.append(_sweep_range(job))
            if progress:
                progress(job[4], total)
    else:
        ctx = get_context("fork")
        with ctx.Pool(workers) as pool:
            done = 0
            for job, out in zip(jobs, pool.imap(_sweep_range, jobs)):
                results.append(out)
                done += job[4] - job[3]
                if progress:
                    progress(done, total)
    zero = Fraction(0) if mode == "depolarizing" else 0
    matrix = [[zero for _ in range(8)] for _ in range(8)]
    witnesses: dict[str, dict] = {}
    for m, w in results:
        for a in range(8):
            for b in range(8):
                matrix[a][b] += m[a][b]
        for key, wit in w.items():
            witnesses.setdefault(key, wit)
    return MalignancyReport(
        gadget=gadget.name,
        noise_mode=mode,
        include_storage=gadget.meta.get("include_storage", True),
        pruned=pruned,
        census={int(t): c for t, c in gadget.census().items()},
        matrix=matrix,
        B=gadget.three_subsets(),
        witnesses=witnesses,
        location_count=n,
    )


def fraction_stats(report: MalignancyReport) -> dict[str, float]:
    """Share of malignant pairs involving CNOTs and storage locations."""
    A = float(report.A)
    if A == 0:
        return {"cnot_involving": 0.0, "cnot_cnot": 0.0, "storage_involving": 0.0}
    m = report.matrix_floats()
    row = int(LocationType.CNOT) - 1
    involving = sum(m[row]) + sum(m[i][row] for i in range(row + 1, 8))
    storage = sum(m[i][j] for i in range(8) for j in range(i + 1) if i < 2 or j < 2)
    return {
        "cnot_involving": involving / A,
        "cnot_cnot": m[row][row] / A,
        "storage_involving": storage / A,
    }


# --- Monte Carlo cross-check --------------------------------------------------------


@dataclass
class MonteCarloResult:
    shots: int
    failures: int
    estimate: float
    stderr: float

    def ci(self, sigmas: float = 3.0) -> tuple[float, float]:
        lo = max(0.0, self.estimate - sigmas * self.stderr)
        return lo, self.estimate + sigmas * self.stderr


def monte_carlo_failure(gadget: Gadget, eps, shots: int, seed: int = 0,
                        engine: Engine | None = None) -> MonteCarloResult:
    """Sample iid faults and count accepted-and-failed runs.

    ``eps`` is a scalar rate or a mapping from location-type number to a
    rate.  Inputs are clean; rotation companions are sampled uniformly
    at crossed locations.  The estimate is the joint probability of
    acceptance and failure, the quantity the pair-count bound caps.
    """
    if shots < 1:
        raise ValueError("need at least one shot")
    eng = engine or Engine(gadget)
    rng = np.random.default_rng(seed)
    locs = gadget.locations
    if isinstance(eps, dict):
        p = np.array([float(eps.get(int(l.ltype), 0.0)) for l in locs])
    else:
        p = np.full(len(locs), float(eps))
    alphabets = [location_alphabet(l.ltype) for l in locs]
    kind = gadget.meta["kind"]
    failures = 0
    done = 0
    while done < shots:
        m = min(20_000, shots - done)
        done += m
        hits = rng.random((m, len(locs))) < p
        for r in np.nonzero(hits.any(axis=1))[0]:
            cons = ZERO_CONS
            for lid in np.nonzero(hits[r])[0]:
                _, x_args, z_args = alphabets[lid][rng.integers(len(alphabets[lid]))]
                cons = xor_cons(cons, eng.fault_consequence(int(lid), x_args, z_args))
            if kind == "cnot_exrec":
                acc_x, fail_x = eng.eval_cnot_sector("x", cons)
                if not acc_x:
                    continue
                acc_z, fail_z = eng.eval_cnot_sector("z", cons)
                if acc_z and (fail_x or fail_z):
                    failures += 1
            else:
                acc_x, fail_x = eng.eval_astate_x(cons)
                if not acc_x:
                    continue
                zcons = cons
                for k in range(len(eng.t_ids)):
                    if (cons[TCROSS] >> k) & 1 and rng.integers(2):
                        zcons = xor_cons(zcons, eng.t_cons[eng.t_ids[k]])
                flips = zcons[FLIPS]
                if any((flips & mask).bit_count() & 1
                       for mask in eng.reject_rows_z + eng.trivial_rows_z):
                    continue
                p0 = (flips & eng.parity_rows[0]).bit_count() & 1
                p1 = (flips & eng.parity_rows[1]).bit_count() & 1
                if p0 == p1 and (fail_x or (eng._flip[zcons[OUT_Z] & 0x7F] ^ p0)):
                    failures += 1
    est = failures / shots
    stderr = math.sqrt(max(est * (1 - est), 1.0 / shots) / shots)
    return MonteCarloResult(shots=shots, failures=failures, estimate=est, stderr=stderr)


def pair_bound(report: MalignancyReport, eps: float) -> float:
    """The quadratic-plus-cubic failure bound at uniform rate ``eps``."""
    return float(report.A) * eps * eps + report.B * eps ** 3
