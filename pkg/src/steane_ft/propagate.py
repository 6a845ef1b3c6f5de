"""Deterministic Pauli-frame propagation through a gadget.

The frame tracks the accumulated X/Z deviation of the physical state
from the fault-free run; it evolves strictly linearly (no recovery is
ever applied to the qubits).  Diagnosed corrections live in a classical
record per block: each syndrome extraction is interpreted *relative* to
the running record, the record propagates through the transversal gate
like any Pauli, and the effective error of a block is frame XOR record.
The non-Clifford rotation gates follow the pessimistic rule: an X
component crossing one picks up a Z companion that an adversarially
chosen scenario bit turns on or off.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import CheckKind, Gadget, Location, LocationType
from .pauli import BlockError, PauliOp, sector_tables

_PAULI_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class WiringError(RuntimeError):
    """A location touched a qubit outside its live window."""


@dataclass
class FaultScenario:
    """Faults keyed by location id, plus input errors and rotation bits.

    Fault descriptors are Pauli labels: one character for single-qubit
    locations, two (control then target) for CNOTs.  ``t_bits`` holds
    the adversarial Z-companion choice for rotation locations crossed by
    an X component; missing entries default to 0.
    """

    faults: dict[int, str] = field(default_factory=dict)
    input_errors: dict[str, PauliOp] = field(default_factory=dict)
    t_bits: dict[int, int] = field(default_factory=dict)

    def fault_bits(self, loc: Location) -> tuple[int, int]:
        """Packed (x, z) masks of this scenario's fault at ``loc``."""
        label = self.faults.get(loc.id)
        if label is None:
            return 0, 0
        if len(label) != len(loc.qubits):
            raise ValueError(f"fault {label!r} does not fit location {loc.id}")
        x = z = 0
        for ch, q in zip(label.upper(), loc.qubits):
            xb, zb = _PAULI_BITS[ch]
            x |= xb << q
            z |= zb << q
        return x, z


@dataclass
class PauliFrame:
    """Live frame bits (packed ints) plus measurement outcome flips."""

    x: int = 0
    z: int = 0
    outcome_flips: dict[int, int] = field(default_factory=dict)
    alive: int = 0

    def apply(self, loc: Location, scenario: FaultScenario) -> None:
        """Advance the frame through one location, injecting its fault.

        Faults land right after the ideal operation, except at
        measurements where they land right before readout.
        """
        t = loc.ltype
        if t in (LocationType.MEAS_X, LocationType.MEAS_Z):
            fx, fz = scenario.fault_bits(loc)
            self.x ^= fx
            self.z ^= fz
            q = loc.qubits[0]
            if not (self.alive >> q) & 1:
                raise WiringError(f"measurement of dead qubit {q}")
            bit = 1 << q
            src = self.z if t == LocationType.MEAS_X else self.x
            self.outcome_flips[loc.id] = (src >> q) & 1
            self.x &= ~bit
            self.z &= ~bit
            self.alive &= ~bit
            return
        if t in (LocationType.PREP_ZERO, LocationType.PREP_PLUS):
            bit = 1 << loc.qubits[0]
            self.x &= ~bit
            self.z &= ~bit
            self.alive |= bit
        elif t == LocationType.CNOT:
            c, g = loc.qubits
            if not ((self.alive >> c) & 1 and (self.alive >> g) & 1):
                raise WiringError(f"CNOT on dead qubit at location {loc.id}")
            self.x ^= ((self.x >> c) & 1) << g
            self.z ^= ((self.z >> g) & 1) << c
        elif t == LocationType.TGATE:
            q = loc.qubits[0]
            if (self.x >> q) & 1:
                self.z ^= scenario.t_bits.get(loc.id, 0) << q
        # rests are the identity
        fx, fz = scenario.fault_bits(loc)
        self.x ^= fx
        self.z ^= fz


@dataclass
class RunResult:
    accepted: bool
    output_errors: dict[str, BlockError]
    measured_eigenvalue_bits: tuple[int, ...]
    seam_flips: dict[str, tuple[int, int]]  # block -> (x flip, z flip) absorbed at the seam
    expected_flips: dict[str, tuple[int, int]]
    records: dict[str, tuple[int, int]]  # block -> (x record, z record)
    frame: PauliFrame


def _block_field(value: int, qubits) -> int:
    out = 0
    for i, q in enumerate(qubits):
        out |= ((value >> q) & 1) << i
    return out


def _reduce_pattern(pattern: int) -> tuple[int, int]:
    """(logical flip, coset-representative residual) of a 7-bit pattern."""
    decode, synd, flip = sector_tables()
    return flip[pattern], decode[synd[pattern]]


def run(gadget: Gadget, scenario: FaultScenario) -> RunResult:
    """Propagate a scenario through a gadget and evaluate its checks."""
    decode, synd_of, _flips_tab = sector_tables()
    frame = PauliFrame()
    for name, qubits in gadget.input_blocks.items():
        frame.alive |= sum(1 << q for q in qubits)
        err = scenario.input_errors.get(name)
        if err is not None:
            for i, q in enumerate(qubits):
                frame.x |= ((err.x_part >> i) & 1) << q
                frame.z |= ((err.z_part >> i) & 1) << q

    seam_snapshot: tuple[int, int] | None = None
    ga_path = gadget.meta.get("ga_path")
    for loc in gadget.locations:
        if ga_path is not None and seam_snapshot is None and loc.path == ga_path:
            seam_snapshot = (frame.x, frame.z)
        frame.apply(loc, scenario)

    def check_bits(check) -> int:
        value = 0
        for r, row in enumerate(check.rows):
            parity = 0
            for j, loc_id in enumerate(check.inputs):
                if (row >> j) & 1:
                    parity ^= frame.outcome_flips.get(loc_id, 0)
            value |= parity << r
        return value

    accepted = True
    records = {name: [0, 0] for name in gadget.output_blocks}
    eigenvalue_bits: dict[int, int] = {}
    stages = ("leading", "trailing") if ga_path is not None else (None,)
    for stage in stages:
        for check in gadget.checks:
            if stage is not None and check.stage != stage:
                continue
            value = check_bits(check)
            if check.consumer == "reject":
                if value:
                    accepted = False
            elif check.consumer == "require-trivial":
                if value:
                    accepted = False
            elif check.consumer == "record":
                rec = records[check.block]
                if check.kind == CheckKind.X_SYNDROME:  # diagnoses Z errors
                    rel = value ^ synd_of[rec[1]]
                    rec[1] ^= decode[rel]
                else:  # Z_SYNDROME diagnoses X errors
                    rel = value ^ synd_of[rec[0]]
                    rec[0] ^= decode[rel]
            elif check.consumer.startswith("parity:"):
                eigenvalue_bits[int(check.consumer.split(":")[1])] = value
            else:
                raise ValueError(f"unknown check consumer {check.consumer!r}")
        if stage == "leading":
            seam_records = {b: tuple(r) for b, r in records.items()}
            # the ideal gate propagates the classical record too
            records["tgt"][0] ^= records["ctl"][0]
            records["ctl"][1] ^= records["tgt"][1]

    seam_flips: dict[str, tuple[int, int]] = {}
    expected: dict[str, tuple[int, int]] = {}
    if ga_path is not None:
        sx, sz = seam_snapshot if seam_snapshot is not None else (0, 0)
        for name, qubits in gadget.output_blocks.items():
            dev_x = _block_field(sx, qubits) ^ seam_records[name][0]
            dev_z = _block_field(sz, qubits) ^ seam_records[name][1]
            seam_flips[name] = (_reduce_pattern(dev_x)[0], _reduce_pattern(dev_z)[0])
        bxc, bzc = seam_flips["ctl"]
        bxt, bzt = seam_flips["tgt"]
        expected = {"ctl": (bxc, bzc ^ bzt), "tgt": (bxt ^ bxc, bzt)}

    output_errors = {}
    for name, qubits in gadget.output_blocks.items():
        dev_x = _block_field(frame.x, qubits) ^ records[name][0]
        dev_z = _block_field(frame.z, qubits) ^ records[name][1]
        fx, rx = _reduce_pattern(dev_x)
        fz, rz = _reduce_pattern(dev_z)
        output_errors[name] = BlockError(
            x_part=rx, z_part=rz, logical_x_flip=fx, logical_z_flip=fz)

    bits = tuple(eigenvalue_bits[k] for k in sorted(eigenvalue_bits))
    if len(bits) == 2 and bits[0] != bits[1]:
        accepted = False
    return RunResult(
        accepted=accepted,
        output_errors=output_errors,
        measured_eigenvalue_bits=bits,
        seam_flips=seam_flips,
        expected_flips=expected,
        records={b: tuple(r) for b, r in records.items()},
        frame=frame,
    )


def is_correct_cnot(result: RunResult, scenario: FaultScenario | None = None) -> bool:
    """Logical action of the rectangle matches the ideal gate.

    The input error's logical content was absorbed into the reference at
    the seam, so the output flips must equal the ideal-CNOT propagation
    of the seam flips; the coset residuals are weight <= 1 by the
    perfect-code reduction.
    """
    for name, err in result.output_errors.items():
        want_x, want_z = result.expected_flips[name]
        if err.logical_x_flip != want_x or err.logical_z_flip != want_z:
            return False
        wx, wz = err.sector_weights()
        if wx > 1 or wz > 1:
            return False
    return True


def is_success_a_state(result: RunResult) -> bool:
    """Output deviates by at most one error from the measured eigenstate.

    Only defined for accepted runs: the reference state is fixed by the
    twice-measured, agreeing eigenvalue bit, which the protocol folds
    into the recorded Pauli as a logical Z when it reads 1.
    """
    if not result.accepted:
        raise ValueError("success is only defined conditioned on acceptance")
    err = result.output_errors["data"]
    parity = result.measured_eigenvalue_bits[0]
    if err.logical_x_flip != 0 or (err.logical_z_flip ^ parity) != 0:
        return False
    wx, wz = err.sector_weights()
    return wx <= 1 and wz <= 1


# --- scenario fixtures --------------------------------------------------------

def parse_scenario(text: str) -> FaultScenario:
    """Parse the line format: ``fault <id> <pauli>``, ``input <block>
    <pauli-literal>``, ``tbit <id> <0|1>``.  Blank lines and ``#``
    comments are ignored."""
    sc = FaultScenario()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "fault":
                sc.faults[int(parts[1])] = parts[2].upper()
            elif parts[0] == "input":
                sc.input_errors[parts[1]] = PauliOp.from_label(parts[2])
            elif parts[0] == "tbit":
                sc.t_bits[int(parts[1])] = int(parts[2])
            else:
                raise ValueError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad scenario line {lineno}: {raw!r}") from exc
    return sc


def format_scenario(sc: FaultScenario) -> str:
    lines = [f"fault {i} {p}" for i, p in sorted(sc.faults.items())]
    lines += [f"input {b} {p.label()}" for b, p in sorted(sc.input_errors.items())]
    lines += [f"tbit {i} {b}" for i, b in sorted(sc.t_bits.items()) if b]
    return "\n".join(lines) + ("\n" if lines else "")
