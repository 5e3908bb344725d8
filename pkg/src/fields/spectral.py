import numpy as np
from .grid import Grid
from scipy import fft as sfft
from scipy import signal
from src.utils import workers
from typing import Optional, Tuple, Union
from .field import Field, MetricField, ScalarField, SymTensor2Field, VectorField

FIELD_KINDS = {
    "scalar": ScalarField,
    "vector": VectorField,
    "sym2": SymTensor2Field,
}

def forward(values: np.ndarray, grid: Grid) -> np.ndarray:
    """real-to-complex transform over the trailing grid axes"""
    return sfft.rfftn(values, axes=grid.axes(values), workers=workers())

def backward(coeffs: np.ndarray, grid: Grid) -> np.ndarray:
    """inverse of forward

    irfftn assumes Hermitian symmetry and returns a real array, so the imaginary
    residue of the round trip is zero by construction and never needs a check.
    """
    return sfft.irfftn(coeffs, s=grid.shape, axes=grid.axes(coeffs), workers=workers())

def apply_symbol(values: np.ndarray, grid: Grid, symbol: np.ndarray) -> np.ndarray:
    """multiplies the spectrum of every component by symbol (broadcastable to grid.spectral_shape)"""
    return backward(symbol * forward(values, grid), grid)

def derivative_array(values: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    """∂_axis of every component of an array whose trailing axes are the grid"""
    if not 0 <= axis < grid.dim:
        raise ValueError(f"Axis must be in [0, {grid.dim}), not {axis}")
    k = grid.wavenumbers(derivative=True)[axis]
    return apply_symbol(values, grid, 1j*k)

def gradient_array(values: np.ndarray, grid: Grid) -> np.ndarray:
    """all first partials, the derivative index leads: shape (n, *values.shape)"""
    coeffs = forward(values, grid)
    return np.stack([backward(1j*k*coeffs, grid) for k in grid.wavenumbers(derivative=True)])

def partial_derivative(
    f: Union[Field, np.ndarray],
    axis: int,
    grid: Optional[Grid] = None
) -> Union[Field, np.ndarray]:
    """derivative of the trigonometric interpolant along a grid axis

    Args:
        f (Union[Field, np.ndarray]): field, or a component array whose trailing axes are the grid
        axis (int): coordinate axis
        grid (Grid, optional): grid of a bare array. Defaults to None.

    Returns:
        Union[Field, np.ndarray]: same kind as f, componentwise derivative
    """
    if isinstance(f, Field):
        return f.with_values(derivative_array(f.values, f.grid, axis))
    if grid is None:
        raise ValueError("A grid is needed to differentiate a bare array")
    return derivative_array(np.asarray(f, dtype=float), grid, axis)

def integrate(f: ScalarField, g: Optional[MetricField] = None) -> float:
    """∫ f dv_g by the periodic trapezoidal rule (coordinate measure when g is None)"""
    if g is None:
        return float(np.sum(f.values) * f.grid.cell_volume)
    if f.grid != g.grid:
        raise ValueError(f"Grid mismatch: {f.grid} vs {g.grid}")
    return float(np.sum(f.values * g.volume_element) * f.grid.cell_volume)

def volume(g: MetricField) -> float:
    return float(np.sum(g.volume_element) * g.grid.cell_volume)

def mean(f: ScalarField, g: Optional[MetricField] = None) -> float:
    """average of f against dv_g"""
    total = f.grid.volume if g is None else volume(g)
    return integrate(f, g) / total

def random_band_limited(
    grid: Grid,
    kind: str,
    max_mode: int,
    amplitude: float,
    seed: int,
    variance: str = "lower",
    zero_mean: bool = False
) -> Field:
    """random real field whose spectrum is supported on |m_a| <= max_mode

    Args:
        grid (Grid): grid
        kind (str): one of scalar, vector, sym2
        max_mode (int): highest mode number per axis
        amplitude (float): sup-norm of the result over all components
        seed (int): random seed
        variance (str, optional): variance of tensor kinds. Defaults to "lower".
        zero_mean (bool, optional): drop the constant mode. Defaults to False.

    Returns:
        Field: the sampled field
    """
    assert kind in FIELD_KINDS.keys(), f"Only {list(FIELD_KINDS.keys())} fields are supported, not {kind}"
    if max_mode < 0 or max_mode >= min(grid.resolution)//2:
        raise ValueError(f"max_mode must be in [0, {min(grid.resolution)//2}) for resolution {grid.resolution}, not {max_mode}")
    if amplitude < 0:
        raise ValueError(f"Amplitude must be non negative, not {amplitude}")
    field_cls = FIELD_KINDS[kind]
    components = field_cls.component_shape(grid.dim)
    rng = np.random.default_rng(seed)
    shape = components + grid.spectral_shape
    coeffs = rng.standard_normal(shape) + 1j*rng.standard_normal(shape)
    mask = grid.max_mode_mask(max_mode)
    if zero_mean:
        mask = mask.copy()
        mask[(0,)*grid.dim] = False
    values = backward(coeffs * mask, grid)
    peak = np.max(np.abs(values))
    values = values * (amplitude/peak) if peak > 0 else np.zeros_like(values)
    if components == ():
        return field_cls(grid, values)
    return field_cls(grid, values, variance)

def resample(f: Field, resolution: Union[int, Tuple[int, ...]]) -> Field:
    """samples the trigonometric interpolant of f on the same torus at another resolution,
    exact for band limited fields below both Nyquist modes"""
    grid = Grid.torus(f.grid.dim, resolution, f.grid.period)
    values = f.values
    for axis, r in zip(f.grid.axes(values), grid.resolution):
        values = signal.resample(values, r, axis=axis)
    if f.variance is None:
        return type(f)(grid, values)
    return type(f)(grid, values, f.variance)

def spectrum(f: Field) -> np.ndarray:
    """magnitudes of the discrete Fourier coefficients, normalized by the point count"""
    return np.abs(forward(f.values, f.grid)) / f.grid.n_points

def random_metric(
    grid: Grid,
    amplitude: float,
    max_mode: int,
    seed: int,
    background: Optional[MetricField] = None
) -> MetricField:
    """background (Euclidean by default) plus a random band limited perturbation of sup-norm amplitude"""
    background = MetricField.flat(grid) if background is None else background
    h = random_band_limited(grid, "sym2", max_mode, amplitude, seed)
    return background.perturb(h)
