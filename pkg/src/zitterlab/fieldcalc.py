"""Uniform Cartesian grids (1-3D) and second-order discrete vector calculus.

All differential operators use central differences in the interior and
one-sided second-order stencils on the boundary faces, so first
derivatives are exact for affine fields and the laplacian is exact for
quadratics, up to roundoff.  Fields are immutable once constructed and
every operator is a pure function of its inputs: nothing depends on
evaluation order, and the norm helpers rely on numpy's pairwise
summation so reported numbers are reproducible bit for bit.

A 1D or 2D grid is treated as embedded in 3-space with exact translation
invariance along the missing axes; derivatives along those axes vanish
identically.  Vector fields therefore always carry three components.

Identity checks downstream are evaluated on the *interior* region only
(``INTERIOR_MARGIN`` layers stripped from every face), where the
centered stencils apply.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, ShapeError

MIN_NODES = 5          # narrowest axis the one-sided stencils support
INTERIOR_MARGIN = 2    # boundary layer excluded from identity norms

AXIS_NAMES = ("x", "y", "z")


@dataclass(frozen=True)
class Grid:
    """Uniform, axis-aligned node lattice in 1 to 3 dimensions."""

    dims: tuple[int, ...]
    spacing: tuple[float, ...]
    origin: tuple[float, ...] = field(default=())

    def __post_init__(self):
        dims = tuple(int(n) for n in self.dims)
        spacing = tuple(float(h) for h in self.spacing)
        origin = tuple(float(x) for x in self.origin) if self.origin else (0.0,) * len(dims)
        if not 1 <= len(dims) <= 3:
            raise ConfigurationError(f"grid must have 1-3 axes, got {len(dims)}")
        if len(spacing) != len(dims) or len(origin) != len(dims):
            raise ConfigurationError("dims, spacing and origin must have matching lengths")
        if any(n < MIN_NODES for n in dims):
            raise ConfigurationError(
                f"every axis needs at least {MIN_NODES} nodes for the stencils, got {dims}"
            )
        if any(h <= 0.0 for h in spacing):
            raise ConfigurationError(f"grid spacing must be strictly positive, got {spacing}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "origin", origin)

    @classmethod
    def centered(cls, dims, half_widths) -> "Grid":
        """Grid spanning [-W, W] per axis with the given node counts."""
        dims = tuple(int(n) for n in np.atleast_1d(dims))
        half = tuple(float(w) for w in np.atleast_1d(half_widths))
        if len(half) == 1 and len(dims) > 1:
            half = half * len(dims)
        spacing = tuple(2.0 * w / (n - 1) for n, w in zip(dims, half))
        origin = tuple(-w for w in half)
        return cls(dims, spacing, origin)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def n_nodes(self) -> int:
        return int(np.prod(self.dims))

    @property
    def node_volume(self) -> float:
        return float(np.prod(self.spacing))

    def axis_coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing[axis] * np.arange(self.dims[axis])

    def coords(self) -> tuple[np.ndarray, ...]:
        """Node coordinate arrays, one per axis, each of shape ``dims``."""
        axes = [self.axis_coords(i) for i in range(self.ndim)]
        return tuple(np.meshgrid(*axes, indexing="ij"))


def _frozen_array(values, dtype, shape, what: str) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    if arr.shape != shape:
        raise ShapeError(f"{what}: expected shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ScalarField:
    """One real value per node.  NaN marks a masked node."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "values", _frozen_array(self.values, np.float64, self.grid.dims, "ScalarField")
        )


@dataclass(frozen=True)
class VectorField3:
    """One real 3-vector per node (three components on any grid dimension)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        shape = self.grid.dims + (3,)
        object.__setattr__(
            self, "values", _frozen_array(self.values, np.float64, shape, "VectorField3")
        )

    def component(self, i: int) -> np.ndarray:
        return self.values[..., i]


@dataclass(frozen=True)
class ComplexScalarField:
    """One complex value per node; values must be finite everywhere."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values, np.complex128, self.grid.dims, "ComplexScalarField")
        if not np.all(np.isfinite(arr.real)) or not np.all(np.isfinite(arr.imag)):
            raise ConfigurationError("complex field contains non-finite values")
        object.__setattr__(self, "values", arr)


def require_same_grid(*fields) -> Grid:
    grid = fields[0].grid
    for f in fields[1:]:
        if f.grid != grid:
            raise ShapeError("fields live on different grids")
    return grid


# ---------------------------------------------------------------------------
# stencils


def _first_derivative(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order d/dx along ``axis``: central core, one-sided faces."""
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
    out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
    out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
    return np.moveaxis(out, 0, axis)


def _second_derivative(values: np.ndarray, h: float, axis: int) -> np.ndarray:
    """Second-order d2/dx2 along ``axis``: 3-point core, 4-point faces."""
    v = np.moveaxis(values, axis, 0)
    out = np.empty_like(v)
    h2 = h * h
    out[1:-1] = (v[2:] - 2.0 * v[1:-1] + v[:-2]) / h2
    out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2
    out[-1] = (2.0 * v[-1] - 5.0 * v[-2] + 4.0 * v[-3] - v[-4]) / h2
    return np.moveaxis(out, 0, axis)


def gradient_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    """Gradient of a (possibly complex) node array; shape ``dims + (3,)``.

    Components along axes absent from the grid are identically zero.
    """
    out = np.zeros(grid.dims + (3,), dtype=values.dtype)
    for ax in range(grid.ndim):
        out[..., ax] = _first_derivative(values, grid.spacing[ax], ax)
    return out


def laplacian_values(values: np.ndarray, grid: Grid) -> np.ndarray:
    out = np.zeros_like(values)
    for ax in range(grid.ndim):
        out = out + _second_derivative(values, grid.spacing[ax], ax)
    return out


def gradient(f: ScalarField) -> VectorField3:
    """Discrete gradient, exact for affine fields up to roundoff."""
    return VectorField3(f.grid, gradient_values(f.values, f.grid))


def laplacian(f: ScalarField) -> ScalarField:
    """Discrete laplacian, exact for quadratics up to roundoff."""
    return ScalarField(f.grid, laplacian_values(f.values, f.grid))


def divergence(v: VectorField3) -> ScalarField:
    """Sum of the central-difference derivatives of the components."""
    grid = v.grid
    out = np.zeros(grid.dims)
    for ax in range(grid.ndim):
        out += _first_derivative(v.values[..., ax], grid.spacing[ax], ax)
    return ScalarField(grid, out)


def curl(v: VectorField3) -> VectorField3:
    """Componentwise central-difference curl.

    On 1D/2D grids the derivatives along missing axes vanish exactly,
    which realizes the embedding of a z-independent field in 3-space.
    """
    grid = v.grid

    def d(component: int, axis: int) -> np.ndarray:
        if axis >= grid.ndim:
            return np.zeros(grid.dims)
        return _first_derivative(v.values[..., component], grid.spacing[axis], axis)

    out = np.empty(grid.dims + (3,))
    out[..., 0] = d(2, 1) - d(1, 2)
    out[..., 1] = d(0, 2) - d(2, 0)
    out[..., 2] = d(1, 0) - d(0, 1)
    return VectorField3(grid, out)


# ---------------------------------------------------------------------------
# interior norms


def interior_slices(grid: Grid) -> tuple[slice, ...]:
    return tuple(slice(INTERIOR_MARGIN, n - INTERIOR_MARGIN) for n in grid.dims)


def interior_values(f) -> np.ndarray:
    return f.values[interior_slices(f.grid)]


def max_norm(values: np.ndarray) -> float:
    """Max of |values| ignoring masked (NaN) nodes."""
    a = np.abs(np.asarray(values, dtype=np.complex128) if np.iscomplexobj(values) else values)
    if np.all(np.isnan(a)):
        return float("nan")
    return float(np.nanmax(np.abs(a)))


def l2_norm(values: np.ndarray, grid: Grid) -> float:
    """Volume-weighted discrete L2 norm, ignoring masked (NaN) nodes."""
    a = np.abs(values)
    return float(np.sqrt(np.nansum(a * a) * grid.node_volume))


def interior_max(f) -> float:
    return max_norm(interior_values(f))


def interior_l2(f) -> float:
    return l2_norm(interior_values(f), f.grid)


def convergence_slope(spacings, errors) -> float:
    """Least-squares slope of log(error) against log(spacing)."""
    hs = np.asarray(spacings, dtype=float)
    es = np.asarray(errors, dtype=float)
    if np.any(es <= 0.0):
        raise ConfigurationError("convergence slope needs strictly positive errors")
    return float(np.polyfit(np.log(hs), np.log(es), 1)[0])


# ---------------------------------------------------------------------------
# serialization

_FIELD_KINDS = {
    "scalar": ScalarField,
    "vector3": VectorField3,
    "complex": ComplexScalarField,
}


def _kind_of(f) -> str:
    for kind, cls in _FIELD_KINDS.items():
        if isinstance(f, cls):
            return kind
    raise ShapeError(f"not a field type: {type(f)!r}")


def save_field(path, f) -> None:
    """Write a field to a self-describing ``.npz`` container.

    The header records dims, spacing, origin and the field kind; the
    payload is the raw node array.
    """
    np.savez(
        path,
        kind=np.array(_kind_of(f)),
        dims=np.array(f.grid.dims, dtype=np.int64),
        spacing=np.array(f.grid.spacing, dtype=np.float64),
        origin=np.array(f.grid.origin, dtype=np.float64),
        values=f.values,
    )


def load_field(path):
    with np.load(path) as data:
        kind = str(data["kind"])
        grid = Grid(
            tuple(int(n) for n in data["dims"]),
            tuple(float(h) for h in data["spacing"]),
            tuple(float(x) for x in data["origin"]),
        )
        values = data["values"]
    try:
        cls = _FIELD_KINDS[kind]
    except KeyError:
        raise ConfigurationError(f"unknown field kind {kind!r} in container") from None
    return cls(grid, values)


def _fmt(x) -> str:
    return repr(float(x))


def field_to_csv(path, f) -> None:
    """One node per row, row-major order: coordinates then value(s)."""
    grid = f.grid
    coords = grid.coords()
    kind = _kind_of(f)
    headers = list(AXIS_NAMES[: grid.ndim])
    if kind == "scalar":
        headers += ["value"]
        columns = [f.values.ravel()]
    elif kind == "complex":
        headers += ["re", "im"]
        columns = [f.values.real.ravel(), f.values.imag.ravel()]
    else:
        headers += ["vx", "vy", "vz"]
        columns = [f.values[..., i].ravel() for i in range(3)]
    coord_cols = [c.ravel() for c in coords]
    with open(path, "w", newline="") as fh:
        fh.write(",".join(headers) + "\n")
        for row in zip(*coord_cols, *columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")
