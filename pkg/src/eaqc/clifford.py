"""Phase-tracking stabilizer tableaux and the transversal Clifford operators.

A Pauli operator is stored as i^phase · prod_j X^x_j Z^z_j with the global
phase exponent kept mod 4.  Gate conjugation rules follow from this
convention; the test suite validates every primitive against brute-force
unitary conjugation on 2x2 / 4x4 matrices before anything else relies on
them.

The three operators built here act across a full code block: a Hadamard
layer with a block-reversal qubit permutation, a phase-gate/CZ layer, and
the Hadamard conjugate of the latter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from eaqc.eacode import EaCode
from eaqc.gf2 import BinaryMatrix, RowBasis, gfrank, nullspace
from eaqc.models import _require_odd_prime, special_prime_model

__all__ = [
    "PauliVector",
    "Tableau",
    "GateSequence",
    "stabilizer_matrix",
    "conjugate",
    "conjugate_pauli",
    "hadamard_swap",
    "s_cz",
    "h_s_cz",
    "group_preserved",
    "logical_operators",
    "logical_action",
    "code_tableau",
]

_GATE_ARITY = {"H": 1, "S": 1, "SDG": 1, "CZ": 2, "SWAP": 2}


@dataclass(frozen=True)
class PauliVector:
    """i^phase · prod_j X^x_j Z^z_j on a register of qubits.

    The (x, z) pair encodes I/X/Y/Z as (0,0)/(1,0)/(1,1)/(0,1); the Y
    convention is Y = i·XZ, so a bare Y on one qubit is (x=1, z=1,
    phase=1).
    """

    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self) -> None:
        x = np.ascontiguousarray(np.asarray(self.x, dtype=np.uint8) & 1)
        z = np.ascontiguousarray(np.asarray(self.z, dtype=np.uint8) & 1)
        if x.ndim != 1 or z.shape != x.shape:
            raise ValueError("x and z must be equal-length bit vectors")
        x.flags.writeable = False
        z.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def qubits(self) -> int:
        return len(self.x)

    @staticmethod
    def identity(qubits: int) -> "PauliVector":
        return PauliVector(np.zeros(qubits, np.uint8), np.zeros(qubits, np.uint8))

    @staticmethod
    def from_support(qubits: int, x_on=(), z_on=(), phase: int = 0) -> "PauliVector":
        x = np.zeros(qubits, dtype=np.uint8)
        z = np.zeros(qubits, dtype=np.uint8)
        x[list(x_on)] = 1
        z[list(z_on)] = 1
        return PauliVector(x, z, phase)

    def __mul__(self, other: "PauliVector") -> "PauliVector":
        if self.qubits != other.qubits:
            raise ValueError("qubit counts differ")
        # moving other's X block through self's Z block costs (-1) each hit
        cross = int(np.sum(self.z & other.x))
        return PauliVector(
            self.x ^ other.x,
            self.z ^ other.z,
            (self.phase + other.phase + 2 * cross) % 4,
        )

    def commutes(self, other: "PauliVector") -> bool:
        if self.qubits != other.qubits:
            raise ValueError("qubit counts differ")
        s = int(np.sum(self.x & other.z)) + int(np.sum(self.z & other.x))
        return s % 2 == 0

    def symplectic(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliVector):
            return NotImplemented
        return (
            self.phase == other.phase
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.z, other.z)
        )

    def __hash__(self) -> int:
        return hash((self.x.tobytes(), self.z.tobytes(), self.phase))


@dataclass(frozen=True)
class GateSequence:
    """Gates listed in order of application (first entry acts first)."""

    gates: tuple[tuple, ...]

    def __post_init__(self) -> None:
        for g in self.gates:
            name, *qs = g
            if name not in _GATE_ARITY or len(qs) != _GATE_ARITY[name]:
                raise ValueError(f"malformed gate {g!r}")
            if any(q < 0 for q in qs):
                raise ValueError(f"negative qubit index in {g!r}")
            if len(qs) == 2 and qs[0] == qs[1]:
                raise ValueError(f"two-qubit gate on one qubit: {g!r}")

    def __iter__(self):
        return iter(self.gates)

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> "GateSequence":
        swap = {"S": "SDG", "SDG": "S"}
        out = []
        for g in reversed(self.gates):
            name, *qs = g
            out.append((swap.get(name, name), *qs))
        return GateSequence(tuple(out))


@dataclass(frozen=True)
class Tableau:
    """Commuting Pauli generators of a stabilizer group.

    Generators may be dependent; what is enforced is that no dependency
    multiplies out to −I or ±iI, so the sign of any group element is
    well defined by any expression in the generators.
    """

    generators: tuple[PauliVector, ...]

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("a tableau needs at least one generator")
        q = gens[0].qubits
        if any(g.qubits != q for g in gens):
            raise ValueError("generators disagree on qubit count")
        xs = np.stack([g.x for g in gens])
        zs = np.stack([g.z for g in gens])
        gram = (xs @ zs.T + zs @ xs.T) % 2
        if gram.any():
            raise ValueError("generators do not pairwise commute")
        deps = nullspace(self.symplectic().transpose())
        for lam in deps.to_dense():
            prod = PauliVector.identity(q)
            for idx in np.nonzero(lam)[0]:
                prod = prod * gens[idx]
            if prod.phase != 0:
                raise ValueError("a generator dependency multiplies to -I")

    @property
    def qubits(self) -> int:
        return self.generators[0].qubits

    def symplectic(self) -> BinaryMatrix:
        rows = np.stack([g.symplectic() for g in self.generators])
        return BinaryMatrix.from_dense(rows)


# ── gate application ──────────────────────────────────────────────────


def _apply_gates(xs: np.ndarray, zs: np.ndarray, phases: np.ndarray,
                 gates: GateSequence, qubits: int) -> None:
    """Conjugate rows (in place) by each gate in order.

    Rules per the i^phase·X^x·Z^z convention:
      H:    swap x,z; phase += 2xz
      S:    z ^= x;  phase += x
      S†:   z ^= x;  phase += 3x
      CZ:   z_a ^= x_b, z_b ^= x_a; phase += 2 x_a x_b
      SWAP: exchange both columns
    """
    for g in gates:
        name, *qs = g
        if any(q >= qubits for q in qs):
            raise ValueError(f"gate {g!r} is out of range for {qubits} qubits")
        if name == "H":
            (q,) = qs
            phases += 2 * (xs[:, q].astype(np.int64) * zs[:, q])
            xs[:, q], zs[:, q] = zs[:, q].copy(), xs[:, q].copy()
        elif name == "S":
            (q,) = qs
            phases += xs[:, q]
            zs[:, q] ^= xs[:, q]
        elif name == "SDG":
            (q,) = qs
            phases += 3 * xs[:, q].astype(np.int64)
            zs[:, q] ^= xs[:, q]
        elif name == "CZ":
            a, b = qs
            phases += 2 * (xs[:, a].astype(np.int64) * xs[:, b])
            za = zs[:, a] ^ xs[:, b]
            zb = zs[:, b] ^ xs[:, a]
            zs[:, a], zs[:, b] = za, zb
        else:  # SWAP
            a, b = qs
            xs[:, [a, b]] = xs[:, [b, a]]
            zs[:, [a, b]] = zs[:, [b, a]]
    phases %= 4


def conjugate_pauli(v: PauliVector, g: GateSequence) -> PauliVector:
    xs = v.x.copy()[None, :]
    zs = v.z.copy()[None, :]
    ph = np.array([v.phase], dtype=np.int64)
    _apply_gates(xs, zs, ph, g, v.qubits)
    return PauliVector(xs[0], zs[0], int(ph[0]))


def conjugate(t: Tableau, g: GateSequence) -> Tableau:
    xs = np.stack([gen.x for gen in t.generators]).copy()
    zs = np.stack([gen.z for gen in t.generators]).copy()
    ph = np.array([gen.phase for gen in t.generators], dtype=np.int64)
    _apply_gates(xs, zs, ph, g, t.qubits)
    return Tableau(tuple(
        PauliVector(xs[i], zs[i], int(ph[i])) for i in range(len(t.generators))
    ))


# ── the block stabilizer and its transversal operators ────────────────


def stabilizer_matrix(p: int) -> Tableau:
    """p(p−1) generators on p²+1 qubits from the scalar-multiple grid.

    Block-row i of the deterministic grid contributes p X-type generators
    for i = 1..(p−1)/2 and p Z-type generators for i = (p−1)/2+1..p−1;
    every generator also touches the final shared-pair qubit.
    """
    _require_odd_prime(p)
    rho = (p - 1) // 2
    q = p * p + 1
    grid = special_prime_model(p).exponents
    gens = []
    for kind_is_x, lo in ((True, 1), (False, rho + 1)):
        for i in range(lo, lo + rho):
            for u in range(p):
                support = [j * p + (u + int(grid[i, j])) % p for j in range(p)]
                support.append(p * p)
                if kind_is_x:
                    gens.append(PauliVector.from_support(q, x_on=support))
                else:
                    gens.append(PauliVector.from_support(q, z_on=support))
    return Tableau(tuple(gens))


def hadamard_swap(p: int) -> GateSequence:
    """Transversal H on every qubit, then block j <-> block p+1-j swaps."""
    _require_odd_prime(p)
    q = p * p + 1
    gates = [("H", i) for i in range(q)]
    for i in range(2, (p + 1) // 2 + 1):
        for k in range(1, p + 1):
            a = (i - 1) * p + k
            b = (p + 1 - i) * p + k
            gates.append(("SWAP", a - 1, b - 1))
    return GateSequence(tuple(gates))


def s_cz(p: int) -> GateSequence:
    """CZ between mirrored blocks, S on the first block, S† on the last qubit.

    Every gate acts on a disjoint qubit set, so the listed order is
    immaterial.
    """
    _require_odd_prime(p)
    gates = []
    for j in range(1, (p - 1) // 2 + 1):
        for k in range(1, p + 1):
            gates.append(("CZ", p * j + k - 1, p * (p - j) + k - 1))
    gates.extend(("S", i) for i in range(p))
    gates.append(("SDG", p * p))
    return GateSequence(tuple(gates))


def h_s_cz(p: int) -> GateSequence:
    """The s_cz operator conjugated by a transversal Hadamard layer."""
    q = p * p + 1
    hs = tuple(("H", i) for i in range(q))
    return GateSequence(hs + s_cz(p).gates + hs)


# ── group preservation and logical structure ──────────────────────────


def group_preserved(before: Tableau, after: Tableau) -> bool:
    """Row spaces match and every after-generator re-expresses with sign +1."""
    if before.qubits != after.qubits:
        raise ValueError("tableaux act on different registers")
    basis = RowBasis.build(before.symplectic())
    sym_after = after.symplectic()
    if not bool(np.all(basis.contains_batch(sym_after))):
        return False
    if gfrank(sym_after) != basis.rank:
        return False
    for gen in after.generators:
        coeff = basis.coefficients(gen.symplectic())
        prod = PauliVector.identity(before.qubits)
        for idx in np.nonzero(coeff)[0]:
            prod = prod * before.generators[idx]
        if prod.phase != gen.phase:
            return False
    return True


def code_tableau(code: EaCode) -> Tableau:
    """Independent generators from the extended check matrices.

    X-type rows carry hex in the x half, Z-type rows carry hez in the z
    half; dependent rows are dropped greedily.
    """
    q = code.n + code.c
    rows = []
    hx_dense = code.hex.to_dense()
    hz_dense = code.hez.to_dense()
    zeros = np.zeros(q, dtype=np.uint8)
    for r in hx_dense:
        rows.append(np.concatenate([r, zeros]))
    for r in hz_dense:
        rows.append(np.concatenate([zeros, r]))
    keep = []
    rank = 0
    for i, r in enumerate(rows):
        cand = keep + [i]
        m = BinaryMatrix.from_dense(np.stack([rows[j] for j in cand]))
        if gfrank(m) > rank:
            keep = cand
            rank += 1
    gens = []
    for i in keep:
        v = rows[i]
        gens.append(PauliVector(v[:q], v[q:]))
    return Tableau(tuple(gens))


def _symplectic_form(u: np.ndarray, v: np.ndarray, q: int) -> int:
    return int(np.sum(u[:q] & v[q:]) + np.sum(u[q:] & v[:q])) % 2


def logical_operators(obj) -> list[tuple[PauliVector, PauliVector]]:
    """Canonical anticommuting logical pairs modulo the stabilizer.

    Builds the normalizer as the kernel of the symplectically swapped
    generator matrix, quotients out the stabilizer rows, and pairs the
    representatives so each X-side anticommutes only with its own Z-side.
    """
    t = code_tableau(obj) if isinstance(obj, EaCode) else obj
    q = t.qubits
    sym = t.symplectic().to_dense()
    swapped = np.hstack([sym[:, q:], sym[:, :q]])
    kernel = nullspace(BinaryMatrix.from_dense(swapped)).to_dense()
    # extend the stabilizer rows to a basis of the normalizer
    reps: list[np.ndarray] = []
    stacked = sym.copy()
    rank = gfrank(BinaryMatrix.from_dense(stacked))
    for v in kernel:
        trial = np.vstack([stacked, v])
        r = gfrank(BinaryMatrix.from_dense(trial))
        if r > rank:
            stacked, rank = trial, r
            reps.append(v.copy())
    pairs = []
    remaining = reps
    while remaining:
        a = remaining[0]
        rest = remaining[1:]
        hit = next(
            (i for i, b in enumerate(rest) if _symplectic_form(a, b, q) == 1),
            None,
        )
        if hit is None:
            raise RuntimeError("degenerate symplectic form on the quotient")
        b = rest.pop(hit)
        cleaned = []
        for cvec in rest:
            if _symplectic_form(cvec, b, q):
                cvec = cvec ^ a
            if _symplectic_form(cvec, a, q):
                cvec = cvec ^ b
            cleaned.append(cvec)
        pairs.append(
            (PauliVector(a[:q], a[q:]), PauliVector(b[:q], b[q:]))
        )
        remaining = cleaned
    return pairs


def _check_logical_basis(
    t: Tableau, logicals: list[tuple[PauliVector, PauliVector]]
) -> None:
    flat = [op for pair in logicals for op in pair]
    for op in flat:
        if op.qubits != t.qubits:
            raise ValueError("logical operator register size mismatch")
        if any(not op.commutes(g) for g in t.generators):
            raise ValueError("a supplied logical fails to commute with the group")
    for i, (xi, zi) in enumerate(logicals):
        if xi.commutes(zi):
            raise ValueError(f"pair {i} does not anticommute")
        for j, (xj, zj) in enumerate(logicals):
            if i == j:
                continue
            if not (
                xi.commutes(xj)
                and xi.commutes(zj)
                and zi.commutes(xj)
                and zi.commutes(zj)
            ):
                raise ValueError("cross-pair commutation violated")


def logical_action(
    t: Tableau,
    logicals: list[tuple[PauliVector, PauliVector]],
    g: GateSequence,
) -> dict[str, tuple[str, ...]]:
    """Image of each logical under g, written in the supplied logical basis.

    Keys and factors are 1-based labels "X1", "Z1", ...  Signs of the
    images are not reported: a representative shifts by stabilizer
    elements, which flips signs freely, so only the class is meaningful.
    """
    after = conjugate(t, g)
    if not group_preserved(t, after):
        raise ValueError("the gate sequence does not preserve the stabilizer group")
    _check_logical_basis(t, logicals)
    q = t.qubits
    stab = RowBasis.build(t.symplectic())
    out: dict[str, tuple[str, ...]] = {}
    for i, pair in enumerate(logicals, start=1):
        for kind, op in zip(("X", "Z"), pair):
            image = conjugate_pauli(op, g)
            vec = image.symplectic()
            factors = []
            residual = vec.copy()
            for j, (xj, zj) in enumerate(logicals, start=1):
                if _symplectic_form(vec, zj.symplectic(), q):
                    factors.append(f"X{j}")
                    residual = residual ^ xj.symplectic()
                if _symplectic_form(vec, xj.symplectic(), q):
                    factors.append(f"Z{j}")
                    residual = residual ^ zj.symplectic()
            if not stab.contains(residual):
                raise RuntimeError(
                    "image does not reduce to the logical basis modulo the group"
                )
            out[f"{kind}{i}"] = tuple(factors)
    return out
