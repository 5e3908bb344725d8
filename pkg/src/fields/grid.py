import numpy as np
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

Number = Union[int, float]

@dataclass(frozen=True)
class Grid:
    """uniform periodic grid on the flat torus T^n = R^n / (L_1 Z x ... x L_n Z)

    Args:
        dim (int): torus dimension n (>= 2)
        resolution (Tuple[int, ...]): points per axis, each even and >= 8
        period (Tuple[float, ...]): period L_a of each axis
    """
    dim: int
    resolution: Tuple[int, ...]
    period: Tuple[float, ...]

    def __post_init__(self):
        if self.dim < 2:
            raise ValueError(f"Grid dimension must be >= 2, not {self.dim}")
        resolution = tuple(int(r) for r in self.resolution)
        period = tuple(float(p) for p in self.period)
        if len(resolution) != self.dim or len(period) != self.dim:
            raise ValueError(f"Grid needs {self.dim} resolutions and periods, got {len(resolution)} and {len(period)}")
        for r in resolution:
            if r < 8 or r % 2 != 0:
                raise ValueError(f"Grid resolution must be even and >= 8, not {r}")
        for p in period:
            if not np.isfinite(p) or p <= 0:
                raise ValueError(f"Grid period must be positive, not {p}")
        object.__setattr__(self, "resolution", resolution)
        object.__setattr__(self, "period", period)

    @classmethod
    def torus(
        cls,
        dim: int,
        resolution: Union[int, Sequence[int]],
        period: Union[Number, Sequence[Number]] = 2*np.pi
    ) -> "Grid":
        """builds a torus grid, scalars are repeated on every axis"""
        if isinstance(resolution, (int, np.integer)):
            resolution = (int(resolution),) * dim
        if isinstance(period, (int, float, np.number)):
            period = (float(period),) * dim
        return cls(dim=dim, resolution=tuple(resolution), period=tuple(period))

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.resolution

    @property
    def spectral_shape(self) -> Tuple[int, ...]:
        """shape of the real-to-complex transform of a grid array"""
        return self.resolution[:-1] + (self.resolution[-1]//2 + 1,)

    @property
    def n_points(self) -> int:
        return int(np.prod(self.resolution))

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(p/r for p, r in zip(self.period, self.resolution))

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def volume(self) -> float:
        return float(np.prod(self.period))

    def axes(self, values: np.ndarray) -> Tuple[int, ...]:
        """grid axes of an array whose trailing dims are the grid"""
        return tuple(range(values.ndim - self.dim, values.ndim))

    def coordinates(self) -> np.ndarray:
        """coordinates x_a of every point, shape (n, *shape)"""
        lines = [np.arange(r) * h for r, h in zip(self.resolution, self.spacing)]
        return np.stack(np.meshgrid(*lines, indexing="ij"))

    def mode_numbers(self) -> Tuple[np.ndarray, ...]:
        """integer mode numbers per axis broadcastable to spectral_shape"""
        modes = []
        for a, r in enumerate(self.resolution):
            if a == self.dim - 1:
                m = np.fft.rfftfreq(r, d=1.0/r)
            else:
                m = np.fft.fftfreq(r, d=1.0/r)
            shape = [1] * self.dim
            shape[a] = m.size
            modes.append(m.reshape(shape))
        return tuple(modes)

    def wavenumbers(self, derivative: bool = False) -> Tuple[np.ndarray, ...]:
        """physical wavenumbers 2 pi m / L per axis broadcastable to spectral_shape

        Args:
            derivative (bool, optional): zero the Nyquist mode, as needed by odd derivatives. Defaults to False.
        """
        ks = []
        for a, (m, r, p) in enumerate(zip(self.mode_numbers(), self.resolution, self.period)):
            k = 2*np.pi*m/p
            if derivative:
                k = np.where(np.abs(m) == r//2, 0.0, k)
            ks.append(k)
        return tuple(ks)

    def max_mode_mask(self, max_mode: int) -> np.ndarray:
        """True on modes with |m_a| <= max_mode on every axis"""
        mask = np.ones(self.spectral_shape, dtype=bool)
        for m in self.mode_numbers():
            mask = mask & (np.abs(m) <= max_mode)
        return mask

    def to_dict(self) -> dict:
        return {"dim": self.dim, "resolution": list(self.resolution), "period": list(self.period)}
