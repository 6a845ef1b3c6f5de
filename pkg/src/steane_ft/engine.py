"""Linear-consequence engine backing the exhaustive pair sweeps.

Frame propagation is GF(2)-linear, so the engine precomputes, for every
elementary injection (an X or Z on one qubit of one location, plus the
per-block input-error generators), its full downstream consequence: the
measurement-flip vector, the data frames at the rectangle seam, the
final frames, and the set of rotation locations crossed by the X
component.  Any scenario is then an XOR of consequences, and the
acceptance and correctness predicates become cheap mask arithmetic.

The adversarial Z companions at rotation locations enter as free GF(2)
variables; a scenario fails when the affine system "every acceptance
check passes and the output carries a logical flip" is satisfiable.

Everything here is cross-validated against the independent interpreter
in ``propagate`` (witness replay and randomized equivalence tests).
"""

from __future__ import annotations

from fractions import Fraction

from .circuit import CheckKind, Gadget, LocationType
from .pauli import H_ROWS, sector_tables

# consequence tuple indices
FLIPS, SEAM_X, SEAM_Z, OUT_X, OUT_Z, TCROSS = range(6)
ZERO_CONS = (0, 0, 0, 0, 0, 0)

_LOGICAL = 0b0000111


def xor_cons(a: tuple, b: tuple) -> tuple:
    return (a[0] ^ b[0], a[1] ^ b[1], a[2] ^ b[2], a[3] ^ b[3], a[4] ^ b[4], a[5] ^ b[5])


def gf2_solution(rows: list[tuple[int, int]]) -> int | None:
    """A particular solution of an affine system, or None.

    Rows are (coefficient mask, rhs).  Free variables are set to zero.
    """
    basis: dict[int, tuple[int, int]] = {}
    for mask, rhs in rows:
        while mask:
            p = mask.bit_length() - 1
            got = basis.get(p)
            if got is None:
                basis[p] = (mask, rhs)
                break
            mask ^= got[0]
            rhs ^= got[1]
        else:
            if rhs:
                return None
    # every non-pivot bit of a row sits below its pivot, so fixing pivots
    # in increasing order needs no further elimination (free bits are 0)
    solution = 0
    for p in sorted(basis):
        mask, rhs = basis[p]
        below = mask & ((1 << p) - 1)
        solution |= (rhs ^ ((below & solution).bit_count() & 1)) << p
    return solution


# per-location Pauli alphabets as (label, x-bits-per-arg, z-bits-per-arg)
_ONE_QUBIT = (("X", (1,), (0,)), ("Y", (1,), (1,)), ("Z", (0,), (1,)))
_TWO_QUBIT = tuple(
    (a + b, (xa, xb), (za, zb))
    for a, (xa, za) in (("I", (0, 0)), ("X", (1, 0)), ("Y", (1, 1)), ("Z", (0, 1)))
    for b, (xb, zb) in (("I", (0, 0)), ("X", (1, 0)), ("Y", (1, 1)), ("Z", (0, 1)))
    if not (a == "I" and b == "I")
)


def location_alphabet(ltype: LocationType):
    """Nontrivial Pauli fault labels with per-argument (x, z) bits."""
    if ltype == LocationType.CNOT:
        return _TWO_QUBIT
    return _ONE_QUBIT


def pauli_weight_share(ltype: LocationType) -> Fraction:
    """Depolarizing weight of each nontrivial Pauli at this location."""
    return Fraction(1, 15) if ltype == LocationType.CNOT else Fraction(1, 3)


class Engine:
    """Precomputed consequence tables and predicate evaluators."""

    def __init__(self, gadget: Gadget):
        self.gadget = gadget
        kind = gadget.meta.get("kind")
        if kind not in ("cnot_exrec", "a_state_exrec", "steane_ec"):
            raise ValueError(f"no sweep support for gadget kind {kind!r}")
        self.kind = kind
        decode, synd, flip = sector_tables()
        self._decode, self._synd, self._flip = decode, synd, flip

        locs = gadget.locations
        self._meas_pos = {}
        for loc in locs:
            if loc.ltype in (LocationType.MEAS_X, LocationType.MEAS_Z):
                self._meas_pos[loc.id] = len(self._meas_pos)
        self.t_ids = tuple(l.id for l in locs if l.ltype == LocationType.TGATE)
        self._t_index = {lid: i for i, lid in enumerate(self.t_ids)}

        ga_path = gadget.meta.get("ga_path")
        self._seam_index = None
        if ga_path is not None:
            self._seam_index = min(l.id for l in locs if l.path == ga_path)

        self._compiled = [(int(l.ltype), l.qubits, l.id) for l in locs]
        self.blocks = {name: tuple(qs) for name, qs in gadget.output_blocks.items()}
        self.block_base = {name: qs[0] for name, qs in self.blocks.items()}

        self.elem: dict[tuple[int, str, int], tuple] = {}
        for i, loc in enumerate(locs):
            at_meas = loc.ltype in (LocationType.MEAS_X, LocationType.MEAS_Z)
            for k, q in enumerate(loc.qubits):
                self.elem[(loc.id, "x", k)] = self._propagate(i, 1 << q, 0, at_meas)
                self.elem[(loc.id, "z", k)] = self._propagate(i, 0, 1 << q, at_meas)
        self.input_elem: dict[tuple[str, str, int], tuple] = {}
        for name, qs in gadget.input_blocks.items():
            for pos, q in enumerate(qs):
                self.input_elem[(name, "x", pos)] = self._propagate(0, 1 << q, 0, False, True)
                self.input_elem[(name, "z", pos)] = self._propagate(0, 0, 1 << q, False, True)
        self.t_cons = {}
        for i, loc in enumerate(locs):
            if loc.ltype == LocationType.TGATE:
                self.t_cons[loc.id] = self._propagate(i, 0, 1 << loc.qubits[0], False)

        self._index_checks()

    # --- propagation ------------------------------------------------------

    def _propagate(self, index: int, x: int, z: int, at_meas: bool,
                   from_start: bool = False) -> tuple:
        flips = 0
        tcross = 0
        seam_x = seam_z = 0
        seam_index = self._seam_index
        compiled = self._compiled
        start = index if (at_meas or from_start) else index + 1
        for i in range(start, len(compiled)):
            ltype, qubits, lid = compiled[i]
            if lid == seam_index:
                seam_x, seam_z = x, z
            if ltype == 7:  # CNOT: X forward, Z backward
                c, g = qubits
                x ^= ((x >> c) & 1) << g
                z ^= ((z >> g) & 1) << c
            elif ltype == 5:  # MEAS_X reads the Z frame
                q = qubits[0]
                flips |= ((z >> q) & 1) << self._meas_pos[lid]
                keep = ~(1 << q)
                x &= keep
                z &= keep
            elif ltype == 6:  # MEAS_Z reads the X frame
                q = qubits[0]
                flips |= ((x >> q) & 1) << self._meas_pos[lid]
                keep = ~(1 << q)
                x &= keep
                z &= keep
            elif ltype == 8:  # rotation: record X crossings
                q = qubits[0]
                if (x >> q) & 1:
                    tcross |= 1 << self._t_index[lid]
            elif ltype in (3, 4):  # preparations reset the frame
                keep = ~(1 << qubits[0])
                x &= keep
                z &= keep
        return (flips, seam_x, seam_z, x, z, tcross)

    # --- check indexing -----------------------------------------------------

    def _dense_rows(self, check) -> list[int]:
        rows = []
        for row in check.rows:
            mask = 0
            for j, loc_id in enumerate(check.inputs):
                if (row >> j) & 1:
                    mask |= 1 << self._meas_pos[loc_id]
            rows.append(mask)
        return rows

    def _index_checks(self) -> None:
        gadget = self.gadget
        locs = {l.id: l for l in gadget.locations}
        self.reject_rows_x: list[int] = []  # parity rows over MEAS_Z outcomes
        self.reject_rows_z: list[int] = []
        self.synd_x: dict[tuple[str, str], tuple[int, ...]] = {}
        self.synd_z: dict[tuple[str, str], tuple[int, ...]] = {}
        self.trivial_rows_x: list[int] = []
        self.trivial_rows_z: list[int] = []
        self.parity_rows: list[int] = []
        for check in gadget.checks:
            rows = self._dense_rows(check)
            sector = "x" if locs[check.inputs[0]].ltype == LocationType.MEAS_Z else "z"
            if check.consumer == "reject":
                (self.reject_rows_x if sector == "x" else self.reject_rows_z).extend(rows)
            elif check.consumer == "require-trivial":
                (self.trivial_rows_x if sector == "x" else self.trivial_rows_z).extend(rows)
            elif check.consumer == "record":
                key = (check.block, check.stage)
                if check.kind == CheckKind.Z_SYNDROME:
                    self.synd_x[key] = tuple(rows)
                else:
                    self.synd_z[key] = tuple(rows)
            elif check.consumer.startswith("parity:"):
                self.parity_rows.append(rows[0])

    # --- scenario assembly -----------------------------------------------------

    def fault_consequence(self, loc_id: int, x_args, z_args) -> tuple:
        out = ZERO_CONS
        for k, bit in enumerate(x_args):
            if bit:
                out = xor_cons(out, self.elem[(loc_id, "x", k)])
        for k, bit in enumerate(z_args):
            if bit:
                out = xor_cons(out, self.elem[(loc_id, "z", k)])
        return out

    def sector_parts(self, loc_id: int, sector: str) -> list[tuple]:
        """Consequences of all single-sector components of one location,
        indexed by the argument bitmask (index 0 is the trivial part)."""
        loc = self.gadget.locations[loc_id]
        nargs = len(loc.qubits)
        parts = [ZERO_CONS]
        for r in range(1, 1 << nargs):
            out = ZERO_CONS
            for k in range(nargs):
                if (r >> k) & 1:
                    out = xor_cons(out, self.elem[(loc_id, sector, k)])
            parts.append(out)
        return parts

    # --- CNOT exRec predicates ----------------------------------------------------

    def _syndrome_bits(self, flips: int, rows) -> int:
        s = 0
        for i, m in enumerate(rows):
            s |= ((flips & m).bit_count() & 1) << i
        return s

    def eval_cnot_sector(self, sector: str, cons: tuple) -> tuple[bool, bool]:
        """(accepted, logical failure) for one CSS sector.

        ``cons`` is the XOR of every injected component in this sector,
        input errors included.  The seam reduction absorbs the logical
        content entering the rectangle; failure means the output flips
        differ from the ideal-gate propagation of the seam flips.
        """
        flips = cons[FLIPS]
        for m in (self.reject_rows_x if sector == "x" else self.reject_rows_z):
            if (flips & m).bit_count() & 1:
                return False, False
        decode, synd_of, flip_of = self._decode, self._synd, self._flip
        if sector == "x":
            synd_checks, seam, out = self.synd_x, cons[SEAM_X], cons[OUT_X]
        else:
            synd_checks, seam, out = self.synd_z, cons[SEAM_Z], cons[OUT_Z]
        base_c = self.block_base["ctl"]
        base_t = self.block_base["tgt"]
        rec_c = decode[self._syndrome_bits(flips, synd_checks[("ctl", "leading")])]
        rec_t = decode[self._syndrome_bits(flips, synd_checks[("tgt", "leading")])]
        b_c = flip_of[((seam >> base_c) & 0x7F) ^ rec_c]
        b_t = flip_of[((seam >> base_t) & 0x7F) ^ rec_t]
        if sector == "x":  # X propagates control -> target
            want_c, want_t = b_c, b_t ^ b_c
            rec_t ^= rec_c
        else:  # Z propagates target -> control
            want_c, want_t = b_c ^ b_t, b_t
            rec_c ^= rec_t
        s = self._syndrome_bits(flips, synd_checks[("ctl", "trailing")]) ^ synd_of[rec_c]
        rec_c ^= decode[s]
        s = self._syndrome_bits(flips, synd_checks[("tgt", "trailing")]) ^ synd_of[rec_t]
        rec_t ^= decode[s]
        fail = (
            flip_of[((out >> base_c) & 0x7F) ^ rec_c] != want_c
            or flip_of[((out >> base_t) & 0x7F) ^ rec_t] != want_t
        )
        return True, fail

    # --- preparation exRec predicates -----------------------------------------------

    def eval_astate_x(self, cons: tuple) -> tuple[bool, bool]:
        """(accepted, failed) for the X sector; companion bits never act here."""
        flips = cons[FLIPS]
        for m in self.reject_rows_x:
            if (flips & m).bit_count() & 1:
                return False, False
        for m in self.trivial_rows_x:
            if (flips & m).bit_count() & 1:
                return False, False
        return True, self._flip[cons[OUT_X] & 0x7F] != 0

    def eval_astate_z(self, cons: tuple, crossings: int, x_failed: bool,
                      want_solution: bool = False):
        """Whether the adversary can pick companion bits so the run is
        accepted and fails.  With ``want_solution`` also returns a
        ``{rotation location id: bit}`` assignment realizing it.
        """
        active = [k for k in range(len(self.t_ids)) if (crossings >> k) & 1]
        flips0, out0 = cons[FLIPS], cons[OUT_Z] & 0x7F
        c_rows = self.reject_rows_z + self.trivial_rows_z
        p_mask0, p_mask1 = self.parity_rows
        flip_of, decode = self._flip, self._decode

        if not active:
            ok = all(not ((flips0 & m).bit_count() & 1) for m in c_rows)
            p0 = (flips0 & p_mask0).bit_count() & 1
            p1 = (flips0 & p_mask1).bit_count() & 1
            ok = ok and p0 == p1
            result = ok and (x_failed or (flip_of[out0] ^ p0) != 0)
            return (result, {}) if want_solution else result

        t_list = [self.t_cons[self.t_ids[k]] for k in active]

        def flip_form(mask: int) -> tuple[int, int]:
            coeffs = 0
            for k, t in enumerate(t_list):
                coeffs |= ((t[FLIPS] & mask).bit_count() & 1) << k
            return coeffs, (flips0 & mask).bit_count() & 1

        def out_form(mask: int) -> tuple[int, int]:
            coeffs = 0
            for k, t in enumerate(t_list):
                coeffs |= ((t[OUT_Z] & mask).bit_count() & 1) << k
            return coeffs, (out0 & mask).bit_count() & 1

        constraints = [flip_form(m) for m in c_rows]
        pm0 = flip_form(p_mask0)
        pm1 = flip_form(p_mask1)
        constraints.append((pm0[0] ^ pm1[0], pm0[1] ^ pm1[1]))

        def package(sol):
            bits = {self.t_ids[active[k]]: (sol >> k) & 1 for k in range(len(active))}
            return (True, bits) if want_solution else True

        if x_failed:
            sol = gf2_solution(constraints)
            if sol is not None:
                return package(sol)
        # logical-Z failure: flip(v) = mu.v xor mu.decode[synd(v)]; split on
        # the syndrome of the final deviation so the objective is affine
        synd_forms = [out_form(row) for row in H_ROWS]
        mu_form = out_form(_LOGICAL)
        for sigma in range(8):
            rows = list(constraints)
            for r, f in enumerate(synd_forms):
                rows.append((f[0], f[1] ^ ((sigma >> r) & 1)))
            c_sigma = (decode[sigma] & _LOGICAL).bit_count() & 1
            rows.append((mu_form[0] ^ pm0[0], mu_form[1] ^ pm0[1] ^ c_sigma ^ 1))
            sol = gf2_solution(rows)
            if sol is not None:
                return package(sol)
        return (False, {}) if want_solution else False
