"""Circuit intermediate representation for the level-1 gadgets.

A gadget is a time-ordered list of locations (the eight standard types)
plus classical parity checks and an acceptance predicate.  Rests are
explicit: every qubit is covered by exactly one location in every step
between its first and last use.  All builders are deterministic, so two
calls produce structurally identical gadgets and serialized netlists are
byte-stable.

Wiring notes.  The encoder is the canonical depth-4 circuit for the
[[7,1,3]] code: three |+> seeds fan out onto four |0> qubits with nine
CNOTs, one |0>-preparation delayed one step so the first step has no
rest, and two rests in steps 3-4.  Error correction couples the data to
two verified encoded ancillas (|0>-type then |+>-type); its 142
locations include one ancilla rest row and one data rest row, both
during measurement steps.  Rest locations are typed 1 or 2 by the
timeline of the sub-circuit that lays them out; ancilla factories run
asynchronously, so concurrency across sub-circuits does not retype
rests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

from .pauli import H_ROWS


class LocationType(enum.IntEnum):
    """The eight elementary operation kinds; the number doubles as the
    row/column index of the pair-count matrices."""

    REST_GATE = 1     # rest during a gate cycle
    REST_MEAS = 2     # rest during a measurement cycle
    PREP_ZERO = 3     # prepare |0>
    PREP_PLUS = 4     # prepare |+>
    MEAS_X = 5        # destructive X-basis measurement
    MEAS_Z = 6        # destructive Z-basis measurement
    CNOT = 7
    TGATE = 8         # T or T-dagger


RESTS = (LocationType.REST_GATE, LocationType.REST_MEAS)
PREPS = (LocationType.PREP_ZERO, LocationType.PREP_PLUS)
MEASUREMENTS = (LocationType.MEAS_X, LocationType.MEAS_Z)


@dataclass(frozen=True)
class Location:
    id: int
    ltype: LocationType
    step: int
    qubits: tuple[int, ...]  # (control, target) for CNOT
    path: str

    def __post_init__(self) -> None:
        want = 2 if self.ltype == LocationType.CNOT else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.ltype.name} location needs {want} qubit(s)")
        if self.ltype == LocationType.CNOT and self.qubits[0] == self.qubits[1]:
            raise ValueError("CNOT qubits must be distinct")


class CheckKind(enum.Enum):
    X_SYNDROME = "x-syndrome-extract"   # X-generator eigenvalues; diagnoses Z errors
    Z_SYNDROME = "z-syndrome-extract"   # Z-generator eigenvalues; diagnoses X errors
    VERIFY_REJECT = "verify-reject"
    EIGENVALUE_PARITY = "eigenvalue-parity"
    LOGICAL_READOUT = "logical-readout"


@dataclass(frozen=True)
class ClassicalCheck:
    """A GF(2) parity computation on measurement outcomes.

    ``rows`` are masks over the ordered ``inputs`` (measurement location
    ids).  ``consumer`` says how the result feeds the run: ``"reject"``
    (nonzero result rejects the ancilla), ``"record"`` (decode relative
    to the running record and add the correction to the named block),
    ``"require-trivial"`` (nonzero result rejects the preparation), or
    ``"parity:<k>"`` (the k-th measured eigenvalue bit).
    """

    kind: CheckKind
    inputs: tuple[int, ...]
    rows: tuple[int, ...]
    consumer: str
    block: str | None = None
    stage: str = ""


@dataclass(frozen=True)
class Gadget:
    name: str
    n_qubits: int
    locations: tuple[Location, ...]
    checks: tuple[ClassicalCheck, ...]
    input_blocks: dict[str, tuple[int, ...]]
    output_blocks: dict[str, tuple[int, ...]]
    meta: dict = field(default_factory=dict)

    @property
    def location_count(self) -> int:
        return len(self.locations)

    def census(self) -> dict[LocationType, int]:
        counts = {t: 0 for t in LocationType}
        for loc in self.locations:
            counts[loc.ltype] += 1
        return counts

    def three_subsets(self) -> int:
        return math.comb(self.location_count, 3)

    def t_locations(self) -> tuple[Location, ...]:
        return tuple(l for l in self.locations if l.ltype == LocationType.TGATE)

    def netlist(self) -> str:
        """Line-oriented dump with a census header; golden-file stable."""
        census = self.census()
        lines = [
            f"# gadget {self.name} locations={self.location_count} "
            + " ".join(f"t{int(t)}={census[t]}" for t in LocationType),
        ]
        for blocks, tag in ((self.input_blocks, "in"), (self.output_blocks, "out")):
            for bname, qs in sorted(blocks.items()):
                lines.append(f"# {tag} {bname} {','.join(map(str, qs))}")
        for loc in self.locations:
            qs = ",".join(map(str, loc.qubits))
            lines.append(f"{loc.id} {loc.step} {int(loc.ltype)} {qs} {loc.path}")
        for c in self.checks:
            ins = ",".join(map(str, c.inputs))
            rows = ",".join(format(r, "x") for r in c.rows)
            lines.append(
                f"check {c.kind.value} {c.block or '-'} {c.stage or '-'} "
                f"{c.consumer} {ins} {rows}"
            )
        return "\n".join(lines) + "\n"


class _Builder:
    """Accumulates locations in construction order; final ids follow the
    canonical (step, qubits) sort so serialization is deterministic."""

    def __init__(self, name: str):
        self.name = name
        self.raw: list[tuple[LocationType, int, tuple[int, ...], str]] = []
        self.checks: list[ClassicalCheck] = []
        self.next_qubit = 0

    def alloc(self, count: int) -> tuple[int, ...]:
        qs = tuple(range(self.next_qubit, self.next_qubit + count))
        self.next_qubit += count
        return qs

    def add(self, ltype: LocationType, step: int, qubits: tuple[int, ...], path: str) -> int:
        """Returns a provisional index, resolved to the final id at finish()."""
        self.raw.append((ltype, step, qubits, path))
        return len(self.raw) - 1

    def rest_row(self, step: int, qubits, ltype: LocationType, path: str) -> None:
        for q in qubits:
            self.add(ltype, step, (q,), path)

    def finish(self, input_blocks, output_blocks, meta) -> Gadget:
        order = sorted(range(len(self.raw)), key=lambda i: (self.raw[i][1], self.raw[i][2]))
        final_id = {prov: fid for fid, prov in enumerate(order)}
        locations = []
        for prov, (ltype, step, qubits, path) in enumerate(self.raw):
            locations.append(Location(final_id[prov], ltype, step, qubits, path))
        locations.sort(key=lambda l: l.id)
        checks = tuple(
            replace(c, inputs=tuple(final_id[i] for i in c.inputs)) for c in self.checks
        )
        used = set()
        for loc in locations:
            for q in loc.qubits:
                key = (loc.step, q)
                if key in used:
                    raise ValueError(f"qubit {q} used twice in step {loc.step}")
                used.add(key)
        return Gadget(
            name=self.name,
            n_qubits=self.next_qubit,
            locations=tuple(locations),
            checks=checks,
            input_blocks={k: tuple(v) for k, v in input_blocks.items()},
            output_blocks={k: tuple(v) for k, v in output_blocks.items()},
            meta=meta,
        )


# --- encoder ------------------------------------------------------------------

# Fan-out schedule, 0-based qubit indices.  Pivots {0, 1, 3} seed the three
# rows of H; targets are chosen so every step is a perfect matching and the
# delayed qubit (index 5) is first touched in step 3.
_ENCODER_CNOTS = {
    2: ((3, 6), (1, 2), (0, 4)),
    3: ((1, 6), (0, 2), (3, 5)),
    4: ((0, 6), (3, 4), (1, 5)),
}
_ENCODER_PIVOTS = (0, 1, 3)
_ENCODER_DELAYED = 5
_ENCODER_RESTS = {3: 4, 4: 2}  # step -> resting qubit index


def _emit_encoder(b: _Builder, qubits, state: str, step0: int, path: str,
                  include_storage: bool = True) -> None:
    """18 locations (16 without storage), depth 4, starting at step0+1."""
    pivot_prep = LocationType.PREP_PLUS if state == "zero" else LocationType.PREP_ZERO
    other_prep = LocationType.PREP_ZERO if state == "zero" else LocationType.PREP_PLUS
    for i in range(7):
        if i == _ENCODER_DELAYED:
            continue
        b.add(pivot_prep if i in _ENCODER_PIVOTS else other_prep,
              step0 + 1, (qubits[i],), path)
    b.add(other_prep, step0 + 2, (qubits[_ENCODER_DELAYED],), path)
    for step, pairs in _ENCODER_CNOTS.items():
        for ctl, tgt in pairs:
            if state == "zero":
                pair = (qubits[ctl], qubits[tgt])
            else:  # |+> variant: all CNOTs reversed
                pair = (qubits[tgt], qubits[ctl])
            b.add(LocationType.CNOT, step0 + step, pair, path)
    if include_storage:
        for step, q in _ENCODER_RESTS.items():
            b.add(LocationType.REST_GATE, step0 + step, (qubits[q],), path)


def build_encoder(state: str = "zero") -> Gadget:
    """Non-fault-tolerant 7-qubit encoder for the logical |0> or |+>."""
    if state not in ("zero", "plus"):
        raise ValueError("state must be 'zero' or 'plus'")
    b = _Builder(f"encoder_{state}")
    qs = b.alloc(7)
    _emit_encoder(b, qs, state, 0, f"encoder_{state}")
    return b.finish({}, {"block": qs}, {"kind": "encoder", "state": state})


# --- Steane error correction ---------------------------------------------------

_H_MASKS = H_ROWS
_LOGICAL_MASK = 0b0000111


def _emit_steane_ec(b: _Builder, data, step0: int, path: str,
                    include_storage: bool = True, postselect: bool = False,
                    block_name: str = "data", stage: str = "") -> None:
    """One 1-EC on ``data``: 142 locations (116 without storage).

    The data block participates only in steps step0+6..step0+8 (couple,
    rest, couple); the final ancilla measurement lands on step0+9,
    concurrent with whatever the data does next.  With ``postselect``
    the syndrome extractions demand a trivial result instead of feeding
    the correction record.
    """
    a1 = b.alloc(7)  # |0>-type ancilla: couples as control onto data
    v1 = b.alloc(7)  # its verifier
    a2 = b.alloc(7)  # |+>-type ancilla: data couples as control onto it
    v2 = b.alloc(7)  # its verifier
    _emit_encoder(b, a1, "zero", step0, f"{path}/anc_zero", include_storage)
    _emit_encoder(b, v1, "zero", step0, f"{path}/ver_zero", include_storage)
    _emit_encoder(b, a2, "plus", step0 + 1, f"{path}/anc_plus", include_storage)
    _emit_encoder(b, v2, "plus", step0 + 1, f"{path}/ver_plus", include_storage)

    for i in range(7):  # verification couplings
        b.add(LocationType.CNOT, step0 + 5, (a1[i], v1[i]), f"{path}/verify_zero")
        b.add(LocationType.CNOT, step0 + 6, (v2[i], a2[i]), f"{path}/verify_plus")
    v1_meas = [b.add(LocationType.MEAS_Z, step0 + 6, (v1[i],), f"{path}/verify_zero")
               for i in range(7)]
    v2_meas = [b.add(LocationType.MEAS_X, step0 + 7, (v2[i],), f"{path}/verify_plus")
               for i in range(7)]
    if include_storage:
        b.rest_row(step0 + 7, a2, LocationType.REST_MEAS, f"{path}/anc_plus")

    for i in range(7):  # data couplings
        b.add(LocationType.CNOT, step0 + 6, (a1[i], data[i]), f"{path}/couple_zero")
    if include_storage:
        b.rest_row(step0 + 7, data, LocationType.REST_MEAS, f"{path}/data")
    for i in range(7):
        b.add(LocationType.CNOT, step0 + 8, (data[i], a2[i]), f"{path}/couple_plus")
    a1_meas = [b.add(LocationType.MEAS_X, step0 + 7, (a1[i],), f"{path}/syndrome_zero")
               for i in range(7)]
    a2_meas = [b.add(LocationType.MEAS_Z, step0 + 9, (a2[i],), f"{path}/syndrome_plus")
               for i in range(7)]

    b.checks.append(ClassicalCheck(
        kind=CheckKind.VERIFY_REJECT, inputs=tuple(v1_meas),
        rows=_H_MASKS + (_LOGICAL_MASK,), consumer="reject",
        block=block_name, stage=stage))
    b.checks.append(ClassicalCheck(
        kind=CheckKind.VERIFY_REJECT, inputs=tuple(v2_meas),
        rows=_H_MASKS + (_LOGICAL_MASK,), consumer="reject",
        block=block_name, stage=stage))
    consumer = "require-trivial" if postselect else "record"
    b.checks.append(ClassicalCheck(
        kind=CheckKind.X_SYNDROME, inputs=tuple(a1_meas),
        rows=_H_MASKS, consumer=consumer, block=block_name, stage=stage))
    b.checks.append(ClassicalCheck(
        kind=CheckKind.Z_SYNDROME, inputs=tuple(a2_meas),
        rows=_H_MASKS, consumer=consumer, block=block_name, stage=stage))


def build_steane_ec(include_storage: bool = True) -> Gadget:
    """Standalone 1-EC gadget acting on one data block."""
    b = _Builder("steane_ec")
    data = b.alloc(7)
    _emit_steane_ec(b, data, 0, "ec", include_storage, stage="leading")
    return b.finish(
        {"data": data}, {"data": data},
        {"kind": "steane_ec", "include_storage": include_storage,
         "data_entry_step": 6, "data_exit_step": 8},
    )


# --- CNOT extended rectangle ----------------------------------------------------

def build_cnot_exrec(include_storage: bool = True) -> Gadget:
    """Four 1-ECs around one transversal CNOT: 575 / 487 locations."""
    b = _Builder("cnot_exrec" + ("" if include_storage else "_nostorage"))
    ctl = b.alloc(7)
    tgt = b.alloc(7)
    _emit_steane_ec(b, ctl, 0, "lead_ec_ctl", include_storage,
                    block_name="ctl", stage="leading")
    _emit_steane_ec(b, tgt, 0, "lead_ec_tgt", include_storage,
                    block_name="tgt", stage="leading")
    for i in range(7):
        b.add(LocationType.CNOT, 9, (ctl[i], tgt[i]), "cnot_ga")
    _emit_steane_ec(b, ctl, 4, "trail_ec_ctl", include_storage,
                    block_name="ctl", stage="trailing")
    _emit_steane_ec(b, tgt, 4, "trail_ec_tgt", include_storage,
                    block_name="tgt", stage="trailing")
    return b.finish(
        {"ctl": ctl, "tgt": tgt}, {"ctl": ctl, "tgt": tgt},
        {"kind": "cnot_exrec", "include_storage": include_storage,
         "ga_path": "cnot_ga",
         "leading_prefixes": ("lead_ec_ctl", "lead_ec_tgt")},
    )


# --- cat state preparation -------------------------------------------------------

# Middle-seeded chain: |+> on index 3, entangling CNOTs fan outward, and
# the two end qubits (6, then 0) are probed onto a |0> verifier.  Any
# single fault leaving two or more X errors on the cat flips the probe
# parity, so the verifier measurement catches it.
_CAT_PREPS = {3: (1, "plus"), 4: (1, "zero"), 2: (2, "zero"), 5: (2, "zero"),
              1: (3, "zero"), 6: (3, "zero"), 0: (4, "zero")}
_CAT_CNOTS = {2: ((3, 4),), 3: ((3, 2), (4, 5)), 4: ((2, 1), (5, 6)),
              5: ((1, 0), (6, "v")), 6: ((0, "v"),)}
_CAT_RESTS = {4: (3, 4), 5: (2, 3, 4, 5), 6: (1, 2, 3, 4, 5, 6)}


def _emit_cat_prep(b: _Builder, cat, verifier: int, step0: int, path: str) -> None:
    """36 locations over 7 steps; the verifier is measured in the last."""
    for idx, (step, state) in _CAT_PREPS.items():
        ltype = LocationType.PREP_PLUS if state == "plus" else LocationType.PREP_ZERO
        b.add(ltype, step0 + step, (cat[idx],), path)
    b.add(LocationType.PREP_ZERO, step0 + 4, (verifier,), path)
    for step, pairs in _CAT_CNOTS.items():
        for ctl, tgt in pairs:
            pair = (cat[ctl], verifier if tgt == "v" else cat[tgt])
            b.add(LocationType.CNOT, step0 + step, pair, path)
    for step, idxs in _CAT_RESTS.items():
        for idx in idxs:
            b.add(LocationType.REST_GATE, step0 + step, (cat[idx],), path)
    b.rest_row(step0 + 7, cat, LocationType.REST_MEAS, path)
    vm = b.add(LocationType.MEAS_Z, step0 + 7, (verifier,), path)
    b.checks.append(ClassicalCheck(
        kind=CheckKind.VERIFY_REJECT, inputs=(vm,), rows=(0b1,),
        consumer="reject", block=None, stage=path))


def build_cat_prep() -> Gadget:
    """Seven-qubit cat state encoding and verification (36 locations)."""
    b = _Builder("cat_prep")
    cat = b.alloc(7)
    v = b.alloc(1)[0]
    _emit_cat_prep(b, cat, v, 0, "cat")
    return b.finish({}, {"cat": cat}, {"kind": "cat_prep"})


# --- the non-Clifford ancilla exRec ------------------------------------------------

def build_a_state_exrec() -> Gadget:
    """Preparation exRec for the pi/8-rotation ancilla (521 locations).

    The encoded block is measured twice in the rotated basis via
    verified cat states (T layer, transversal CNOT from cat, T-dagger
    layer, cat measured in X), each round followed by postselected error
    correction.  Accepted only if every verifier is clean, both error
    syndromes are trivial, and the two measured eigenvalue bits agree.
    The data rests one final row while the last syndrome measurement
    that decides acceptance completes.
    """
    b = _Builder("a_state_exrec")
    data = b.alloc(7)
    path = "a_state"
    _emit_encoder(b, data, "zero", 0, f"{path}/encoder")

    for rnd, (cat0, ec0) in enumerate(((1, 7), (11, 17))):
        tag = f"{path}/round{rnd}"
        cat = b.alloc(7)
        v = b.alloc(1)[0]
        _emit_cat_prep(b, cat, v, cat0 - 1, f"{tag}/cat")
        # Data idles for three rows while the cat finishes; the last row
        # coincides with the cat verifier measurement.
        b.rest_row(cat0 + 4, data, LocationType.REST_GATE, f"{tag}/wait_cat")
        b.rest_row(cat0 + 5, data, LocationType.REST_GATE, f"{tag}/wait_cat")
        b.rest_row(cat0 + 6, data, LocationType.REST_MEAS, f"{tag}/wait_cat")
        m0 = cat0 + 6  # step of the cat verifier measurement
        for i in range(7):
            b.add(LocationType.TGATE, m0 + 1, (data[i],), f"{tag}/rot")
        b.rest_row(m0 + 1, cat, LocationType.REST_GATE, f"{tag}/cat_wait")
        for i in range(7):
            b.add(LocationType.CNOT, m0 + 2, (cat[i], data[i]), f"{tag}/couple")
        for i in range(7):
            b.add(LocationType.TGATE, m0 + 3, (data[i],), f"{tag}/rot_dag")
        b.rest_row(m0 + 3, cat, LocationType.REST_GATE, f"{tag}/cat_wait")
        cm = [b.add(LocationType.MEAS_X, m0 + 4, (cat[i],), f"{tag}/cat_meas")
              for i in range(7)]
        b.rest_row(m0 + 4, data, LocationType.REST_MEAS, f"{tag}/wait_meas")
        b.checks.append(ClassicalCheck(
            kind=CheckKind.EIGENVALUE_PARITY, inputs=tuple(cm),
            rows=(0b1111111,), consumer=f"parity:{rnd}", block="data", stage=tag))
        _emit_steane_ec(b, data, ec0 - 1, f"{tag}/ec", include_storage=True,
                        postselect=True, block_name="data", stage=tag)
    b.rest_row(25, data, LocationType.REST_MEAS, f"{path}/final_wait")
    return b.finish(
        {}, {"data": data},
        {"kind": "a_state_exrec",
         "first_half_prefixes": (f"{path}/encoder", f"{path}/round0"),
         "second_ec_prefix": f"{path}/round1/ec"},
    )
