"""Pauli-string algebra, Jordan-Wigner mapping and exact diagonalization.

Conventions used throughout the package:

* qubit ``i`` is spin-orbital ``i``;
* a Pauli string is written with qubit 0 first (``"XZ"`` is X on qubit 0,
  Z on qubit 1);
* qubit 0 is the least-significant bit of a basis-state index, so the dense
  matrix of ``"XZ"`` is ``kron(Z, X)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Union

import numpy as np

from vqelab.errors import CapacityError, DimensionError, ParseError, ValidationError

__all__ = [
    "PauliAxis",
    "PauliString",
    "PauliTerm",
    "QubitHamiltonian",
    "FermionTerm",
    "FermionHamiltonian",
    "pauli_multiply",
    "jordan_wigner",
    "number_penalty",
    "simplify",
    "dense_matrix",
    "exact_ground_energy",
    "load_hamiltonian",
    "dump_hamiltonian",
    "read_hamiltonian",
    "bundled_molecule",
    "DEFAULT_TOL",
    "MAX_DENSE_QUBITS",
    "MAX_JW_ORBITALS",
]

DEFAULT_TOL = 1e-12
MAX_DENSE_QUBITS = 12
MAX_JW_ORBITALS = 16

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class PauliAxis(str, enum.Enum):
    I = "I"  # noqa: E741
    X = "X"
    Y = "Y"
    Z = "Z"


# (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_AXIS_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {}
for _a in "IXYZ":
    _AXIS_PRODUCT[("I", _a)] = (1, _a)
    _AXIS_PRODUCT[(_a, "I")] = (1, _a)
    _AXIS_PRODUCT[(_a, _a)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _AXIS_PRODUCT[(_a, _b)] = (1j, _c)
    _AXIS_PRODUCT[(_b, _a)] = (-1j, _c)


@dataclass(frozen=True, order=True)
class PauliString:
    """Tensor product of single-qubit Paulis, stored as text (qubit 0 first)."""

    axes: str

    def __post_init__(self):
        axes = "".join(a.value if isinstance(a, PauliAxis) else str(a) for a in self.axes)
        if not axes:
            raise ValidationError("a Pauli string needs at least one qubit")
        bad = set(axes) - set("IXYZ")
        if bad:
            raise ValidationError(f"invalid Pauli axes {sorted(bad)} in {axes!r}")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def identity(cls, n_qubits: int) -> PauliString:
        return cls("I" * n_qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.axes)

    @property
    def weight(self) -> int:
        """Number of non-identity factors."""
        return sum(a != "I" for a in self.axes)

    def is_identity(self) -> bool:
        return self.weight == 0

    def __getitem__(self, qubit: int) -> PauliAxis:
        return PauliAxis(self.axes[qubit])

    def __len__(self) -> int:
        return len(self.axes)

    def __str__(self) -> str:
        return self.axes

    def matrix(self) -> np.ndarray:
        return _string_matrix(self.axes)


def _as_string(p: PauliString | str) -> PauliString:
    return p if isinstance(p, PauliString) else PauliString(p)


def _multiply_axes(a: str, b: str) -> tuple[complex, str]:
    phase: complex = 1
    out = []
    for x, y in zip(a, b):
        f, c = _AXIS_PRODUCT[(x, y)]
        phase *= f
        out.append(c)
    return phase, "".join(out)


def pauli_multiply(a: PauliString | str, b: PauliString | str) -> tuple[complex, PauliString]:
    """Multiply two Pauli strings.

    Returns ``(phase, product)`` with ``matrix(a) @ matrix(b) == phase * matrix(product)``
    and ``phase`` one of 1, -1, 1j, -1j.
    """
    a, b = _as_string(a), _as_string(b)
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"cannot multiply {a.n_qubits}- and {b.n_qubits}-qubit strings")
    phase, axes = _multiply_axes(a.axes, b.axes)
    return complex(phase), PauliString(axes)


@dataclass(frozen=True)
class PauliTerm:
    coefficient: complex
    string: PauliString

    def __post_init__(self):
        c = complex(self.coefficient)
        if not (math.isfinite(c.real) and math.isfinite(c.imag)):
            raise ValidationError(f"non-finite coefficient {c} on {self.string}")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "string", _as_string(self.string))


@dataclass(frozen=True)
class QubitHamiltonian:
    """Weighted sum of Pauli strings; coefficients in Hartree."""

    n_qubits: int
    terms: tuple[PauliTerm, ...] = ()

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValidationError("n_qubits must be positive")
        terms = tuple(
            t if isinstance(t, PauliTerm) else PauliTerm(t[0], t[1]) for t in self.terms
        )
        for t in terms:
            if t.string.n_qubits != self.n_qubits:
                raise ValidationError(
                    f"term {t.string} has {t.string.n_qubits} qubits, expected {self.n_qubits}"
                )
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_dict(cls, terms: Mapping[str, complex], n_qubits: int | None = None) -> QubitHamiltonian:
        if n_qubits is None:
            if not terms:
                raise ValidationError("n_qubits is required for an empty Hamiltonian")
            n_qubits = len(next(iter(terms)))
        return cls(n_qubits, tuple(PauliTerm(c, PauliString(s)) for s, c in terms.items()))

    def to_dict(self) -> dict[str, complex]:
        out: dict[str, complex] = {}
        for t in self.terms:
            out[t.string.axes] = out.get(t.string.axes, 0) + t.coefficient
        return out

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return all(abs(c.imag) <= tol for c in simplify(self, 0.0).to_dict().values())

    def __add__(self, other: QubitHamiltonian) -> QubitHamiltonian:
        if not isinstance(other, QubitHamiltonian):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise DimensionError(f"cannot add {self.n_qubits}- and {other.n_qubits}-qubit Hamiltonians")
        return QubitHamiltonian(self.n_qubits, self.terms + other.terms)

    def one_norm(self) -> float:
        """Sum of absolute coefficients over non-identity strings."""
        return float(sum(abs(t.coefficient) for t in self.terms if not t.string.is_identity()))


def simplify(h: QubitHamiltonian, tol: float = DEFAULT_TOL) -> QubitHamiltonian:
    """Combine like terms, drop those with ``|coefficient| <= tol`` and sort by axes."""
    if tol < 0:
        raise ValidationError("tol must be non-negative")
    combined = h.to_dict()
    kept = sorted((s, c) for s, c in combined.items() if abs(c) > tol)
    return QubitHamiltonian(h.n_qubits, tuple(PauliTerm(c, PauliString(s)) for s, c in kept))


@lru_cache(maxsize=4096)
def _string_action(axes: str) -> tuple[int, np.ndarray]:
    """Return ``(flip_mask, phase)`` such that P|i> = phase[i] |i ^ flip_mask>."""
    n = len(axes)
    x_mask = 0
    sign_mask = 0
    n_y = 0
    for q, a in enumerate(axes):
        if a in "XY":
            x_mask |= 1 << q
        if a in "YZ":
            sign_mask |= 1 << q
        n_y += a == "Y"
    idx = np.arange(1 << n, dtype=np.int64)
    parity = np.bitwise_count(idx & sign_mask) & 1
    phase = (1j**n_y) * (1 - 2 * parity.astype(float))
    phase.setflags(write=False)
    return x_mask, phase


def _string_matrix(axes: str) -> np.ndarray:
    x_mask, phase = _string_action(axes)
    dim = phase.size
    m = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    m[cols ^ x_mask, cols] = phase
    return m


def apply_pauli(axes: str, amplitudes: np.ndarray) -> np.ndarray:
    """Return ``P @ amplitudes`` without forming the dense matrix."""
    x_mask, phase = _string_action(axes)
    out = np.empty_like(amplitudes, dtype=complex)
    idx = np.arange(phase.size)
    out[idx ^ x_mask] = phase * amplitudes
    return out


def dense_matrix(h: QubitHamiltonian) -> np.ndarray:
    """Dense ``2**n x 2**n`` matrix of ``sum_a w_a P_a``."""
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense matrices are capped at {MAX_DENSE_QUBITS} qubits")
    dim = 1 << h.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    cols = np.arange(dim)
    for t in h.terms:
        x_mask, phase = _string_action(t.string.axes)
        m[cols ^ x_mask, cols] += t.coefficient * phase
    return m


def exact_ground_energy(h: QubitHamiltonian) -> float:
    """Minimum eigenvalue of ``h`` (the FCI reference energy)."""
    h = simplify(h)
    if h.n_qubits > MAX_DENSE_QUBITS:
        raise CapacityError(f"dense matrices are capped at {MAX_DENSE_QUBITS} qubits")
    for t in h.terms:
        if abs(t.coefficient.imag) > DEFAULT_TOL:
            raise ValidationError(f"non-Hermitian term {t.coefficient} * {t.string}")
    return float(np.linalg.eigvalsh(dense_matrix(h))[0])


# --------------------------------------------------------------------------
# fermions


@dataclass(frozen=True)
class FermionTerm:
    """``onebody``: value * a+_p a_q; ``twobody``: value/2 * a+_p a+_q a_r a_s."""

    kind: str
    indices: tuple[int, ...]
    value: float

    def __post_init__(self):
        arity = {"onebody": 2, "twobody": 4}.get(self.kind)
        if arity is None:
            raise ValidationError(f"unknown fermion term kind {self.kind!r}")
        indices = tuple(int(i) for i in self.indices)
        if len(indices) != arity:
            raise ValidationError(f"{self.kind} term needs {arity} indices, got {len(indices)}")
        if any(i < 0 for i in indices):
            raise ValidationError(f"negative orbital index in {indices}")
        value = float(self.value)
        if not math.isfinite(value):
            raise ValidationError(f"non-finite integral value {value}")
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "value", value)


@dataclass(frozen=True)
class FermionHamiltonian:
    n_orbitals: int
    terms: tuple[FermionTerm, ...] = field(default=())

    def __post_init__(self):
        if self.n_orbitals < 1:
            raise ValidationError("n_orbitals must be positive")
        terms = tuple(self.terms)
        if not terms:
            raise ValidationError("a fermion Hamiltonian needs at least one term")
        for t in terms:
            if max(t.indices) >= self.n_orbitals:
                raise ValidationError(
                    f"orbital index {max(t.indices)} out of range for n_orbitals={self.n_orbitals}"
                )
        object.__setattr__(self, "terms", terms)


_PauliSum = dict[str, complex]


def _ladder(p: int, n: int, dagger: bool) -> _PauliSum:
    z = "Z" * p
    rest = "I" * (n - p - 1)
    return {z + "X" + rest: 0.5, z + "Y" + rest: (-0.5j if dagger else 0.5j)}


def _sum_product(a: _PauliSum, b: _PauliSum) -> _PauliSum:
    out: _PauliSum = {}
    for sa, ca in a.items():
        for sb, cb in b.items():
            phase, s = _multiply_axes(sa, sb)
            out[s] = out.get(s, 0) + phase * ca * cb
    return out


def jordan_wigner(h: FermionHamiltonian, tol: float = DEFAULT_TOL) -> QubitHamiltonian:
    """Map a fermionic Hamiltonian to qubits.

    ``a+_p -> (X_p - iY_p)/2 * Z_0...Z_{p-1}`` and ``a_p -> (X_p + iY_p)/2 * Z_0...Z_{p-1}``.
    Raises ``ValidationError`` when the integral data does not describe a
    Hermitian operator.
    """
    n = h.n_orbitals
    if n > MAX_JW_ORBITALS:
        raise CapacityError(f"Jordan-Wigner mapping is capped at {MAX_JW_ORBITALS} orbitals")
    ladders = {}

    def ladder(p, dagger):
        key = (p, dagger)
        if key not in ladders:
            ladders[key] = _ladder(p, n, dagger)
        return ladders[key]

    total: _PauliSum = {}
    for term in h.terms:
        if term.kind == "onebody":
            p, q = term.indices
            ops = [ladder(p, True), ladder(q, False)]
            weight = term.value
        else:
            p, q, r, s = term.indices
            ops = [ladder(p, True), ladder(q, True), ladder(r, False), ladder(s, False)]
            weight = 0.5 * term.value
        prod = ops[0]
        for op in ops[1:]:
            prod = _sum_product(prod, op)
        for s_, c in prod.items():
            total[s_] = total.get(s_, 0) + weight * c

    scale = max([1.0] + [abs(c) for c in total.values()])
    for s_, c in total.items():
        if abs(c.imag) > 1e-10 * scale:
            raise ValidationError(f"integral data is not Hermitian (term {s_} has coefficient {c})")
    real = {s_: complex(c.real) for s_, c in total.items()}
    return simplify(QubitHamiltonian.from_dict(real, n), tol)


def number_penalty(n_qubits: int, n_electrons: int, weight: float) -> QubitHamiltonian:
    """``weight * (N - n_electrons)**2`` with ``N = sum_i (I - Z_i)/2`` as a Pauli sum.

    Zero on the ``n_electrons`` sector, so adding it leaves that sector's
    spectrum untouched while lifting every other particle number.
    """
    identity = "I" * n_qubits
    number: _PauliSum = {identity: n_qubits / 2 - n_electrons}
    for q in range(n_qubits):
        number[identity[:q] + "Z" + identity[q + 1 :]] = -0.5
    square = _sum_product(number, number)
    return simplify(QubitHamiltonian.from_dict({s: weight * c for s, c in square.items()}, n_qubits))


# --------------------------------------------------------------------------
# molecule files

Hamiltonian = Union[FermionHamiltonian, QubitHamiltonian]


def load_hamiltonian(text: str) -> Hamiltonian:
    """Parse the line-oriented molecule format.

    Header lines ``format: fermion|pauli`` and ``n: <int>`` precede the body.
    Fermion bodies hold ``onebody p q value`` / ``twobody p q r s value``
    lines; Pauli bodies hold ``<axes> <coefficient>`` lines. ``#`` starts a
    comment.
    """
    fmt = None
    n = None
    body: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, _, value = line.partition(":")
            key, value = key.strip().lower(), value.strip()
            if body:
                raise ParseError(f"header field {key!r} after body lines", lineno)
            if key == "format":
                if value not in ("fermion", "pauli"):
                    raise ParseError(f"unknown format {value!r}", lineno)
                fmt = value
            elif key == "n":
                try:
                    n = int(value)
                except ValueError:
                    raise ParseError(f"n must be an integer, got {value!r}", lineno) from None
                if n < 1:
                    raise ValidationError(f"line {lineno}: n must be positive")
            else:
                raise ParseError(f"unknown header field {key!r}", lineno)
            continue
        body.append((lineno, line.split()))

    if fmt is None:
        raise ParseError("missing 'format:' header")
    if n is None:
        raise ParseError("missing 'n:' header")
    if fmt == "pauli":
        return _parse_pauli_body(body, n)
    return _parse_fermion_body(body, n)


def _parse_float(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"cannot parse number {token!r}", lineno) from None
    if not math.isfinite(value):
        raise ValidationError(f"line {lineno}: non-finite value {token!r}")
    return value


def _parse_pauli_body(body, n: int) -> QubitHamiltonian:
    terms = []
    for lineno, tokens in body:
        if len(tokens) != 2:
            raise ParseError(f"expected '<axes> <coefficient>', got {' '.join(tokens)!r}", lineno)
        axes, coef = tokens
        if set(axes) - set("IXYZ"):
            raise ParseError(f"invalid Pauli axes {axes!r}", lineno)
        if len(axes) != n:
            raise ValidationError(f"line {lineno}: {axes!r} has {len(axes)} qubits, header says n={n}")
        terms.append(PauliTerm(_parse_float(coef, lineno), PauliString(axes)))
    return QubitHamiltonian(n, tuple(terms))


def _parse_fermion_body(body, n: int) -> FermionHamiltonian:
    terms = []
    for lineno, tokens in body:
        kind = tokens[0]
        arity = {"onebody": 2, "twobody": 4}.get(kind)
        if arity is None:
            raise ParseError(f"unknown term kind {kind!r}", lineno)
        if len(tokens) != arity + 2:
            raise ParseError(f"{kind} needs {arity} indices and a value", lineno)
        try:
            indices = tuple(int(t) for t in tokens[1:-1])
        except ValueError:
            raise ParseError(f"non-integer index in {' '.join(tokens)!r}", lineno) from None
        if any(i < 0 or i >= n for i in indices):
            raise ValidationError(f"line {lineno}: index out of range for n={n} in {indices}")
        terms.append(FermionTerm(kind, indices, _parse_float(tokens[-1], lineno)))
    if not terms:
        raise ValidationError("fermion file has no terms")
    return FermionHamiltonian(n, tuple(terms))


def dump_hamiltonian(h: Hamiltonian, comments: Iterable[str] = ()) -> str:
    """Serialize to the molecule format; ``load_hamiltonian`` inverts it bit-exactly."""
    lines = [f"# {c}" if c else "#" for c in comments]
    if isinstance(h, FermionHamiltonian):
        lines += ["format: fermion", f"n: {h.n_orbitals}"]
        for t in h.terms:
            lines.append(" ".join([t.kind, *map(str, t.indices), repr(t.value)]))
    else:
        lines += ["format: pauli", f"n: {h.n_qubits}"]
        for t in h.terms:
            if t.coefficient.imag != 0:
                raise ValidationError(f"cannot write complex coefficient on {t.string}")
            lines.append(f"{t.string.axes} {t.coefficient.real!r}")
    return "\n".join(lines) + "\n"


def read_hamiltonian(path: str | Path) -> Hamiltonian:
    return load_hamiltonian(Path(path).read_text())


def bundled_molecule(name: str) -> QubitHamiltonian:
    """Load a shipped fixture (``"h2"`` or ``"heh+"``) as a qubit Hamiltonian."""
    filename = {"h2": "h2.pauli", "heh+": "hehp.pauli", "hehp": "hehp.pauli"}.get(name.lower())
    if filename is None:
        raise ValidationError(f"no bundled molecule named {name!r}")
    text = resources.files("vqelab.data").joinpath(filename).read_text()
    return load_hamiltonian(text)
