"""Truncated chaos algebra: Wick operations, transforms, norms, sampling.

A ChaosField is a finite expansion sum_alpha a_alpha H_alpha over a
truncated index set, with coefficients in one coefficient space: real or
complex scalars, or real/complex grid functions on a shared GridSpec.
Absent indices are zero.  The basis tag records whether H_alpha means the
Gaussian Hermite functionals or the Poisson Charlier functionals; the two
systems share all coefficient-level arithmetic and are swapped by the
unitary correspondence that keeps coefficients fixed.

Wick products are coefficient convolutions,

    (F <> G)_gamma = sum_{alpha + beta = gamma} a_alpha * b_beta,

projected onto a target index set: convolution terms that fall outside the
target are dropped, and their total mass sum ||a_alpha * b_beta|| is
available as a truncation diagnostic (solvers report it).  The Hermite
transform replaces H_alpha by the monomial z^alpha, turning Wick products
into ordinary products of analytic functions; for truncated fields it is
an exact finite sum.

Real and complex coefficients mix freely (results promote to complex);
scalar-valued and grid-valued fields do not, and grid-valued operands must
share one GridSpec.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .grids import GridSpec
from .multiindex import IndexSet, MultiIndex, ZERO_INDEX


class BasisTag(enum.Enum):
    GAUSSIAN_HERMITE = "gaussian-hermite"
    POISSON_CHARLIER = "poisson-charlier"


def _normalize_coeff(value, grid: GridSpec | None):
    if isinstance(value, np.ndarray) or (
        hasattr(value, "__len__") and not isinstance(value, (str, bytes))
    ):
        arr = np.asarray(value)
        arr = arr.astype(complex) if np.iscomplexobj(arr) else arr.astype(float)
        if grid is None:
            raise ValueError("grid-valued coefficients need a GridSpec")
        if arr.shape != grid.shape:
            raise ValueError(f"coefficient shape {arr.shape} != grid shape {grid.shape}")
        return arr
    return complex(value) if isinstance(value, complex) else float(value)


def _is_zero(value) -> bool:
    if isinstance(value, np.ndarray):
        return not np.any(value)
    return value == 0


@dataclass(frozen=True)
class ChaosField:
    """Immutable chaos expansion over a truncated index set."""

    index_set: IndexSet
    coeffs: dict[MultiIndex, object] = field(default_factory=dict)
    tag: BasisTag = BasisTag.GAUSSIAN_HERMITE
    grid: GridSpec | None = None

    def __post_init__(self):
        clean: dict[MultiIndex, object] = {}
        for alpha, value in self.coeffs.items():
            a = MultiIndex(alpha)
            if a not in self.index_set:
                raise ValueError(f"{a!r} outside {self.index_set!r}")
            v = _normalize_coeff(value, self.grid)
            if not _is_zero(v):
                clean[a] = v
        kinds = {isinstance(v, np.ndarray) for v in clean.values()}
        if len(kinds) > 1:
            raise ValueError("coefficients mix scalar and grid values")
        if clean and not kinds.pop() and self.grid is not None:
            raise ValueError("scalar-valued field must not carry a grid")
        object.__setattr__(self, "coeffs", clean)

    # -- classification ------------------------------------------------

    @property
    def is_grid_valued(self) -> bool:
        return self.grid is not None

    @property
    def is_complex(self) -> bool:
        return any(np.iscomplexobj(v) for v in self.coeffs.values())

    @property
    def coefficient_space(self) -> str:
        kind = "grid" if self.is_grid_valued else "scalar"
        return ("complex-" if self.is_complex else "real-") + kind

    def degree(self) -> int:
        """Largest degree carrying a nonzero coefficient."""
        return max((a.degree for a in self.coeffs), default=0)

    # -- element access --------------------------------------------------

    def get(self, alpha) -> object:
        a = MultiIndex(alpha)
        if a in self.coeffs:
            return self.coeffs[a]
        if self.is_grid_valued:
            return np.zeros(self.grid.shape)
        return 0.0

    def items(self):
        return self.coeffs.items()

    # -- linear structure --------------------------------------------------

    def _check_compatible(self, other: "ChaosField"):
        if self.tag is not other.tag:
            raise ValueError("basis tags differ")
        if self.is_grid_valued != other.is_grid_valued:
            raise ValueError("coefficient spaces differ (scalar vs grid)")
        if self.is_grid_valued and self.grid != other.grid:
            raise ValueError("grid specs differ")

    def __add__(self, other: "ChaosField") -> "ChaosField":
        self._check_compatible(other)
        if self.index_set != other.index_set:
            raise ValueError("index sets differ")
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out[a] + v if a in out else v
        return replace(self, coeffs=out)

    def __sub__(self, other: "ChaosField") -> "ChaosField":
        return self + other.scale(-1.0)

    def scale(self, c) -> "ChaosField":
        return replace(self, coeffs={a: c * v for a, v in self.coeffs.items()})

    def conj(self) -> "ChaosField":
        """Index-wise conjugate field (H_alpha are real)."""
        return replace(self, coeffs={a: np.conj(v) for a, v in self.coeffs.items()})

    def coeff_norm(self, value) -> float:
        """||.||_V of one coefficient: modulus, or the grid L2 norm."""
        if isinstance(value, np.ndarray):
            return self.grid.l2_norm(value)
        return abs(value)

    # -- constructors --------------------------------------------------------

    @classmethod
    def unit(cls, index_set: IndexSet, grid: GridSpec | None = None,
             tag: BasisTag = BasisTag.GAUSSIAN_HERMITE) -> "ChaosField":
        one = np.ones(grid.shape) if grid is not None else 1.0
        return cls(index_set, {ZERO_INDEX: one}, tag, grid)

    @classmethod
    def zero(cls, index_set: IndexSet, grid: GridSpec | None = None,
             tag: BasisTag = BasisTag.GAUSSIAN_HERMITE) -> "ChaosField":
        return cls(index_set, {}, tag, grid)


# -- Wick operations -----------------------------------------------------


def _mul_values(a, b):
    return a * b


def wick_mul_overflow(F: ChaosField, G: ChaosField,
                      target: IndexSet | None = None) -> tuple[ChaosField, float]:
    """Wick product projected onto `target`, plus the dropped mass.

    Returns (F <> G, overflow) where overflow = sum over convolution pairs
    with alpha + beta outside the target of ||a_alpha * b_beta||.
    """
    F._check_compatible(G)
    if target is None:
        if F.index_set != G.index_set:
            raise ValueError("give an explicit target when index sets differ")
        target = F.index_set
    out: dict[MultiIndex, object] = {}
    overflow = 0.0
    for alpha, a in F.coeffs.items():
        for beta, b in G.coeffs.items():
            gamma = alpha + beta
            prod = _mul_values(a, b)
            if gamma in target:
                out[gamma] = out[gamma] + prod if gamma in out else prod
            else:
                overflow += F.coeff_norm(prod)
    result = ChaosField(target, out, F.tag, F.grid)
    return result, overflow


def wick_mul(F: ChaosField, G: ChaosField, target: IndexSet | None = None) -> ChaosField:
    """Wick product (F <> G)_gamma = sum_{alpha+beta=gamma} a_alpha b_beta."""
    return wick_mul_overflow(F, G, target)[0]


def wick_pow(F: ChaosField, p: int, target: IndexSet | None = None) -> ChaosField:
    """Iterated Wick product F^{<> p}; p = 0 gives the unit field."""
    if p < 0:
        raise ValueError(f"Wick power needs p >= 0, got {p}")
    if target is None:
        target = F.index_set
    out = ChaosField.unit(target, F.grid, F.tag)
    for _ in range(p):
        out = wick_mul(out, F, target)
    return out


def wick_exp(F: ChaosField, target: IndexSet | None = None) -> ChaosField:
    """Truncated Wick exponential sum_{n<=K} F^{<> n} / n!.

    The zero-index part c is split off and exponentiated exactly:
    exp<>(c + F') = e^c * exp<>(F') with F' zero-mean, whose Wick powers
    terminate at the truncation degree.
    """
    if target is None:
        target = F.index_set
    c = F.get(ZERO_INDEX)
    rest = {a: v for a, v in F.coeffs.items() if a.degree > 0}
    Fp = ChaosField(target, rest, F.tag, F.grid)
    out = ChaosField.unit(target, F.grid, F.tag)
    term = ChaosField.unit(target, F.grid, F.tag)
    for n in range(1, target.max_degree + 1):
        term = wick_mul(term, Fp, target).scale(1.0 / n)
        out = out + term
    return out.scale(np.exp(c))


# -- transforms, norms, moments ----------------------------------------------


def hermite_transform_eval(F: ChaosField, z) -> object:
    """Evaluate the Hermite transform sum_alpha a_alpha z^alpha at one z.

    z is a finite real or complex vector; entries beyond the largest
    supported dimension are ignored.  Exact finite sum over the truncation.
    """
    z = np.atleast_1d(np.asarray(z))
    need = max((a.dims for a in F.coeffs), default=0)
    if len(z) < need:
        raise ValueError(f"z has {len(z)} entries, field uses {need} dimensions")
    total = None
    for alpha, v in F.coeffs.items():
        mono = 1.0
        for j, e in enumerate(alpha):
            if e:
                mono = mono * z[j] ** e
        contrib = v * mono
        total = contrib if total is None else total + contrib
    if total is None:
        return np.zeros(F.grid.shape) if F.is_grid_valued else 0.0
    return total


def hk_norm(F: ChaosField, rho: float, q: int, distribution: bool = False) -> float:
    """Weighted chaos norm of the test-space / distribution-space scales.

    Test norm (default):    sqrt( sum ||a||_V^2 (a!)^{1+rho} (2N)^{+q a} )
    Distribution variant:   sqrt( sum ||a||_V^2 (a!)^{1-rho} (2N)^{-q a} )

    The variant is selected by a flag rather than by the sign of q; both
    scales appear with opposite sign conventions in the source material and
    implicit conventions invite sign bugs.
    """
    if not -1.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [-1, 1], got {rho}")
    expo = (1.0 - rho) if distribution else (1.0 + rho)
    total = 0.0
    for alpha, v in F.coeffs.items():
        w = alpha.weight() ** (-q if distribution else q)
        total += F.coeff_norm(v) ** 2 * float(alpha.factorial()) ** expo * w
    return math.sqrt(total)


def mean_variance(F: ChaosField):
    """(mean, variance) of a Gaussian-tagged field.

    mean is the zero-index coefficient; variance = sum_{alpha != 0}
    alpha! |a_alpha|^2, pointwise for grid coefficients.
    """
    if F.tag is not BasisTag.GAUSSIAN_HERMITE:
        raise ValueError("moments via chaos orthogonality need the Gaussian tag")
    mean = F.get(ZERO_INDEX)
    var = np.zeros(F.grid.shape) if F.is_grid_valued else 0.0
    for alpha, v in F.coeffs.items():
        if alpha.degree > 0:
            var = var + float(alpha.factorial()) * np.abs(v) ** 2
    return mean, var


def sample_eval(F: ChaosField, xi) -> object:
    """Pathwise evaluation sum_alpha a_alpha prod_j h_{alpha_j}(xi_j)."""
    if F.tag is not BasisTag.GAUSSIAN_HERMITE:
        raise ValueError("pathwise Hermite evaluation needs the Gaussian tag")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    need = max((a.dims for a in F.coeffs), default=0)
    if len(xi) < need:
        raise ValueError(f"xi has {len(xi)} entries, field uses {need} dimensions")
    from .hermite import hermite_poly

    total = None
    for alpha, v in F.coeffs.items():
        h = 1.0
        for j, e in enumerate(alpha):
            if e:
                h *= hermite_poly(e, xi[j])
        contrib = v * h
        total = contrib if total is None else total + contrib
    if total is None:
        return np.zeros(F.grid.shape) if F.is_grid_valued else 0.0
    return total


def poisson_correspondence(F: ChaosField) -> ChaosField:
    """Unitary swap between the Hermite and Charlier systems.

    Coefficients are untouched; only the basis tag toggles.  Involutive.
    """
    other = (
        BasisTag.POISSON_CHARLIER
        if F.tag is BasisTag.GAUSSIAN_HERMITE
        else BasisTag.GAUSSIAN_HERMITE
    )
    return replace(F, tag=other)


def analyticity_diagnostic(z, q: int, index_set: IndexSet) -> float:
    """sum_{alpha != 0, alpha in set} |z^alpha|^2 (2N)^{q alpha}.

    Reported as a health indicator for transform evaluation points: for
    truncated fields every z is admissible, but large values flag points
    where the untruncated transform would be poorly controlled.
    """
    z = np.atleast_1d(np.asarray(z))
    total = 0.0
    for alpha in index_set:
        if alpha.degree == 0 or alpha.dims > len(z):
            continue
        mono = 1.0
        for j, e in enumerate(alpha):
            if e:
                mono = mono * z[j] ** e
        total += abs(mono) ** 2 * alpha.weight() ** q
    return float(total)


# -- stacked-array views (solver internals) ------------------------------


def field_to_stack(F: ChaosField, dtype=None) -> np.ndarray:
    """Coefficients as one array of shape (len(index_set), *grid.shape)."""
    if not F.is_grid_valued:
        raise ValueError("stacked views exist for grid-valued fields only")
    if dtype is None:
        dtype = complex if F.is_complex else float
    out = np.zeros((len(F.index_set),) + F.grid.shape, dtype=dtype)
    for alpha, v in F.coeffs.items():
        out[F.index_set.position(alpha)] = v
    return out


def stack_to_field(stack: np.ndarray, index_set: IndexSet, grid: GridSpec,
                   tag: BasisTag = BasisTag.GAUSSIAN_HERMITE) -> ChaosField:
    coeffs = {alpha: stack[i].copy() for i, alpha in enumerate(index_set)}
    return ChaosField(index_set, coeffs, tag, grid)


# -- serialization -----------------------------------------------------------

_MAGIC = b"wickpde-chaos-field v1\n"


def _scalar_text(v) -> str:
    if isinstance(v, complex):
        return f"{v.real!r} {v.imag!r}"
    return repr(float(v))


def save_chaos_field(F: ChaosField, path) -> None:
    """Binary export: text header, then one record per stored index.

    Scalars are written as decimal text; grid coefficients as little-endian
    64-bit floats (real, or interleaved re/im) with a declared node count.
    """
    records = sorted(F.coeffs.items(), key=lambda kv: F.index_set.position(kv[0]))
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(
            f"space={F.coefficient_space} basis={F.tag.value} "
            f"K={F.index_set.max_degree} N={F.index_set.max_dims}\n".encode()
        )
        if F.grid is not None:
            fh.write(f"grid {F.grid.to_text()}\n".encode())
        fh.write(f"records={len(records)}\n".encode())
        for alpha, v in records:
            if isinstance(v, np.ndarray):
                flat = np.ascontiguousarray(v, dtype=complex if np.iscomplexobj(v) else float)
                if np.iscomplexobj(flat):
                    payload = np.empty(flat.size * 2)
                    payload[0::2] = flat.real.ravel()
                    payload[1::2] = flat.imag.ravel()
                else:
                    payload = flat.ravel().astype(float)
                fh.write(f"{alpha.to_text()} nodes={flat.size}\n".encode())
                fh.write(payload.astype("<f8").tobytes())
                fh.write(b"\n")
            else:
                fh.write(f"{alpha.to_text()} = {_scalar_text(v)}\n".encode())


def load_chaos_field(path) -> ChaosField:
    with open(path, "rb") as fh:
        if fh.readline() != _MAGIC:
            raise ValueError(f"{path}: not a chaos field file")
        head = dict(p.split("=", 1) for p in fh.readline().decode().split())
        space = head["space"]
        tag = BasisTag(head["basis"])
        index_set = IndexSet(int(head["K"]), int(head["N"]))
        grid = None
        line = fh.readline().decode()
        if line.startswith("grid "):
            grid = GridSpec.from_text(line[len("grid "):].strip())
            line = fh.readline().decode()
        n_records = int(line.split("=", 1)[1])
        is_complex = space.startswith("complex")
        coeffs: dict[MultiIndex, object] = {}
        for _ in range(n_records):
            header = fh.readline().decode().strip()
            if "nodes=" in header:
                idx_text, nodes_part = header.rsplit(" nodes=", 1)
                alpha = MultiIndex.from_text(idx_text)
                count = int(nodes_part)
                width = 2 * count if is_complex else count
                raw = np.frombuffer(fh.read(width * 8), dtype="<f8")
                fh.read(1)  # trailing newline
                if is_complex:
                    arr = raw[0::2] + 1j * raw[1::2]
                else:
                    arr = raw.copy()
                coeffs[alpha] = arr.reshape(grid.shape)
            else:
                idx_text, value_text = header.split(" = ", 1)
                alpha = MultiIndex.from_text(idx_text)
                parts = value_text.split()
                if len(parts) == 2:
                    coeffs[alpha] = float(parts[0]) + 1j * float(parts[1])
                else:
                    coeffs[alpha] = float(parts[0])
        return ChaosField(index_set, coeffs, tag, grid)
