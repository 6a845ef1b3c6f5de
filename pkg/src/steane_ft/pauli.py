"""Binary symplectic Pauli algebra and the [[7,1,3]] code.

Paulis are phase-free: an n-qubit operator is a 2n-bit vector with the
X-part in the low n bits and the Z-part in the high n bits, and
multiplication is componentwise XOR.  Phases never matter here because
block errors are only ever compared modulo the stabilizer and logical
flips.  The bit layout is fixed so serialized operators are identical
across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

_CHARS = "IXZY"  # index = x_bit + 2*z_bit


class DimensionError(ValueError):
    """Raised when two operators act on different numbers of qubits."""


@dataclass(frozen=True)
class PauliOp:
    """A phase-free Pauli on ``n`` qubits.

    ``bits`` packs the X-part into bits 0..n-1 (bit i set means X on
    qubit i+1) and the Z-part into bits n..2n-1.
    """

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.bits < 0 or self.bits >> (2 * self.n):
            raise ValueError(f"bit vector does not fit in {2 * self.n} bits")

    @classmethod
    def identity(cls, n: int) -> "PauliOp":
        return cls(n, 0)

    @classmethod
    def from_parts(cls, n: int, x_part: int, z_part: int) -> "PauliOp":
        return cls(n, (x_part & ((1 << n) - 1)) | (z_part << n))

    @classmethod
    def from_label(cls, label: str) -> "PauliOp":
        """Parse a textual literal like ``"IXZYIIX"`` (leftmost = qubit 1)."""
        n = len(label)
        x = z = 0
        for i, ch in enumerate(label.upper()):
            try:
                code = _CHARS.index(ch)
            except ValueError:
                raise ValueError(f"bad Pauli character {ch!r} in {label!r}") from None
            x |= (code & 1) << i
            z |= (code >> 1) << i
        return cls.from_parts(n, x, z)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> "PauliOp":
        """A single-qubit X, Y, or Z at 1-based position ``qubit``."""
        code = _CHARS.index(kind.upper())
        return cls.from_parts(n, (code & 1) << (qubit - 1), (code >> 1) << (qubit - 1))

    @property
    def x_part(self) -> int:
        return self.bits & ((1 << self.n) - 1)

    @property
    def z_part(self) -> int:
        return self.bits >> self.n

    def label(self) -> str:
        x, z = self.x_part, self.z_part
        return "".join(_CHARS[((x >> i) & 1) + 2 * ((z >> i) & 1)] for i in range(self.n))

    def __str__(self) -> str:
        return self.label()

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        if self.n != other.n:
            raise DimensionError(f"cannot multiply Paulis on {self.n} and {other.n} qubits")
        return PauliOp(self.n, self.bits ^ other.bits)


def weight(p: PauliOp) -> int:
    """Number of qubits on which ``p`` acts nontrivially."""
    return ((p.x_part | p.z_part)).bit_count()


def commutes(p: PauliOp, q: PauliOp) -> bool:
    """True iff the symplectic product of the two bit vectors vanishes."""
    if p.n != q.n:
        raise DimensionError(f"cannot compare Paulis on {p.n} and {q.n} qubits")
    return (((p.x_part & q.z_part).bit_count() + (p.z_part & q.x_part).bit_count()) & 1) == 0


@dataclass(frozen=True)
class BlockError:
    """Reduced error on one code block: coset residual plus logical flips.

    For the [[7,1,3]] code the residual has weight <= 1 in each CSS
    sector (x_part / z_part are 7-bit masks).
    """

    x_part: int
    z_part: int
    logical_x_flip: int
    logical_z_flip: int

    @property
    def trivial(self) -> bool:
        return not (self.x_part or self.z_part or self.logical_x_flip or self.logical_z_flip)

    def sector_weights(self) -> tuple[int, int]:
        return self.x_part.bit_count(), self.z_part.bit_count()


class StabilizerCode:
    """A CSS stabilizer code defined by its generator matrix over GF(2).

    Rows of ``G`` are 2n-bit Pauli vectors (same packing as PauliOp).
    Construction eagerly builds the full syndrome decode table: for
    n - k = 6 that is 64 entries.
    """

    def __init__(
        self,
        n: int,
        k: int,
        t: int,
        generators: list[int],
        logical_x: PauliOp,
        logical_z: PauliOp,
    ):
        self.n = n
        self.k = k
        self.t = t
        self.G = list(generators)
        self.logical_x = logical_x
        self.logical_z = logical_z
        for i, gi in enumerate(self.G):
            for gj in self.G[i:]:
                if not commutes(PauliOp(n, gi), PauliOp(n, gj)):
                    raise ValueError("generator rows do not mutually commute")
        for name, lop in (("logical_x", logical_x), ("logical_z", logical_z)):
            for gi in self.G:
                if not commutes(lop, PauliOp(n, gi)):
                    raise ValueError(f"{name} does not commute with the stabilizer")
        if commutes(logical_x, logical_z):
            raise ValueError("logical operators must anticommute")
        self.decode_table = self._build_decode_table()

    def _build_decode_table(self) -> dict[int, PauliOp]:
        """Map every syndrome to a minimum-weight correction, brute force."""
        table: dict[int, PauliOp] = {}
        n_syn = self.n - self.k
        # Search by increasing weight so the first hit is minimal.
        frontier = [PauliOp.identity(self.n)]
        seen = {0}
        while len(table) < (1 << n_syn):
            next_frontier = []
            for p in frontier:
                e = syndrome_int(self, p)
                if e not in table:
                    table[e] = p
                for q in range(1, self.n + 1):
                    for kind in "XZY":
                        cand = p * PauliOp.single(self.n, q, kind)
                        if cand.bits not in seen:
                            seen.add(cand.bits)
                            next_frontier.append(cand)
            frontier = next_frontier
            if not frontier and len(table) < (1 << n_syn):
                raise RuntimeError("syndrome table incomplete")
        return table


def syndrome(code: StabilizerCode, p: PauliOp) -> tuple[int, ...]:
    """Syndrome of ``p`` as a bit tuple of length n - k."""
    e = syndrome_int(code, p)
    return tuple((e >> i) & 1 for i in range(code.n - code.k))


def syndrome_int(code: StabilizerCode, p: PauliOp) -> int:
    """Syndrome packed into an int, bit i = anticommutation with row i."""
    if p.n != code.n:
        raise DimensionError(f"Pauli on {p.n} qubits vs code length {code.n}")
    e = 0
    for i, g in enumerate(code.G):
        row = PauliOp(code.n, g)
        if not commutes(row, p):
            e |= 1 << i
    return e


def decode_syndrome(code: StabilizerCode, e) -> PauliOp:
    """Minimum-weight correction whose syndrome equals ``e``.

    ``e`` may be an int or a bit sequence ordered like the generator rows.
    Total for a perfect code.
    """
    if not isinstance(e, int):
        e = sum((1 << i) for i, b in enumerate(e) if b)
    return code.decode_table[e]


def reduce_block_error(code: StabilizerCode, p: PauliOp) -> BlockError:
    """Decompose ``p`` as stabilizer * logical^b * residual, per CSS sector.

    The residual is the decode-table coset representative; the returned
    flip bits say whether a logical X / logical Z had to be absorbed.
    """
    if p.n != code.n:
        raise DimensionError(f"Pauli on {p.n} qubits vs code length {code.n}")
    residual = decode_syndrome(code, syndrome_int(code, p))
    q = p * residual  # in the stabilizer * logicals group now
    # Logical indicator: any dual vector orthogonal to the stabilizer rows
    # with odd overlap with the logical representative.  For the CSS codes
    # used here the logical-Z support works for both sectors.
    mu_x = code.logical_z.z_part
    mu_z = code.logical_x.x_part
    bx = (q.x_part & mu_x).bit_count() & 1
    bz = (q.z_part & mu_z).bit_count() & 1
    return BlockError(
        x_part=residual.x_part,
        z_part=residual.z_part,
        logical_x_flip=bx,
        logical_z_flip=bz,
    )


# --- the [[7,1,3]] instance -------------------------------------------------

#: Parity-check rows, bit i = qubit i+1.  Columns read 1..7 in binary.
H_ROWS = (0b1111000, 0b1100110, 0b1010101)


@lru_cache(maxsize=1)
def steane() -> StabilizerCode:
    """The [[7,1,3]] code: block-diagonal generators H_X = H_Z."""
    n = 7
    gens = [r for r in H_ROWS] + [r << n for r in H_ROWS]
    return StabilizerCode(
        n=n,
        k=1,
        t=1,
        generators=gens,
        logical_x=PauliOp.from_label("XXXIIII"),
        logical_z=PauliOp.from_label("ZZZIIII"),
    )


def sector_syndrome(pattern: int) -> int:
    """3-bit syndrome of a 7-bit single-sector pattern (rows of H)."""
    e = 0
    for i, row in enumerate(H_ROWS):
        e |= ((pattern & row).bit_count() & 1) << i
    return e


@lru_cache(maxsize=1)
def sector_tables() -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
    """Per-sector lookup tables: decode, syndrome-of-pattern, logical flip.

    ``decode[s]`` is the weight<=1 7-bit pattern with syndrome ``s``;
    ``synd[p]`` is the syndrome of any 7-bit pattern; ``flip[p]`` says
    whether ``p`` reduces with a logical flip.  Identical for the X and Z
    sectors because H_X = H_Z.
    """
    decode = [0] * 8
    for q in range(7):
        decode[sector_syndrome(1 << q)] = 1 << q
    synd = tuple(sector_syndrome(p) for p in range(128))
    mu = 0b0000111  # logical support, orthogonal to all rows of H
    flip = tuple(((p ^ decode[synd[p]]) & mu).bit_count() & 1 for p in range(128))
    return tuple(decode), synd, flip
