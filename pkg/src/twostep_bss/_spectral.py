"""Second step by spectral second-order statistics (FT-PCA).

Conventions: one-sided DFT over w_k = 2 pi k / T, k = 0..T//2, with
Parseval weights 2 for interior bins and 1 for DC and Nyquist.  Spectral
covariances are normalized by T**2 so that a flat kernel reproduces the
1/T sample covariance; the constant frequency step is left out since it
does not move eigenvectors.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from ._errors import (ArityError, NoValidKernelError, TooShortError,
                      TrivialKernelError)
from ._separation import eigen_separation
from ._signal import derivative

MIN_DFT_SAMPLES = 4
_SCAN_CHUNK = 256


@dataclass(frozen=True, eq=False)
class SpectrumSet:
    coeffs: np.ndarray
    omegas: np.ndarray
    weights: np.ndarray
    samples: int

    @property
    def channels(self):
        return self.coeffs.shape[0]

    def energy(self):
        """Per-channel sum of squares recovered through Parseval"""
        return np.sum(self.weights * np.abs(self.coeffs) ** 2, axis=1) / self.samples


def dft(x):
    """One-sided DFT of every channel"""
    samples = x.samples
    if samples < MIN_DFT_SAMPLES:
        raise TooShortError(f'DFT needs at least {MIN_DFT_SAMPLES} samples, got {samples}')
    coeffs = np.fft.rfft(x.data, axis=1)
    bins = coeffs.shape[1]
    weights = np.full(bins, 2.0)
    weights[0] = 1.0
    if samples % 2 == 0:
        weights[-1] = 1.0
    omegas = 2 * np.pi * np.arange(bins) / samples
    return SpectrumSet(coeffs=coeffs, omegas=omegas, weights=weights, samples=samples)


class KernelKind(enum.Enum):
    K1 = 'K1'  # w**2, the derivative kernel
    K2 = 'K2'  # 1 / (1 + |w|)
    K3 = 'K3'  # 1 / (1 + |w - w0|)


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind = KernelKind.K3
    omega0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, 'kind', KernelKind(self.kind))
        if not 0 <= self.omega0 <= math.pi:
            raise ValueError('kernel shift omega0 must be in the range [0, pi]')

    def __call__(self, omegas):
        omegas = np.asarray(omegas, dtype=float)
        if self.kind is KernelKind.K1:
            return omegas ** 2
        shift = self.omega0 if self.kind is KernelKind.K3 else 0.0
        return 1 / (1 + np.abs(omegas - shift))

    def __str__(self):
        if self.kind is KernelKind.K3:
            return f'K3(omega0={self.omega0:.6g})'
        return self.kind.value


@dataclass(frozen=True, eq=False)
class SpectralCovariance:
    """2x2 Hermitian matrix of kernel-weighted cross-spectral sums"""

    entries: np.ndarray
    kernel: object = None

    @property
    def z11(self):
        return float(self.entries[0, 0].real)

    @property
    def z22(self):
        return float(self.entries[1, 1].real)

    @property
    def z12(self):
        return complex(self.entries[0, 1])

    @property
    def trace(self):
        return self.z11 + self.z22

    @property
    def det(self):
        return self.z11 * self.z22 - abs(self.z12) ** 2


def spectral_covariance(spectrum, kernel):
    """sum_k w_k K(w_k) Z_i[k] conj(Z_j[k]) / T**2

    :param kernel: KernelSpec or any callable mapping frequencies to
        non-negative weights
    """
    if spectrum.channels != 2:
        raise ArityError(f'spectral covariance needs 2 channels, got {spectrum.channels}')
    scale = spectrum.weights * kernel(spectrum.omegas) / spectrum.samples ** 2
    entries = (spectrum.coeffs * scale) @ spectrum.coeffs.conj().T
    entries = (entries + entries.conj().T) / 2
    return SpectralCovariance(entries=entries, kernel=kernel)


def f1_statistic(covariance):
    """(Z11 - Z22)**2 + 4 |Z12|**2, i.e. trace**2 - 4 det; rotation invariant"""
    if not isinstance(covariance, SpectralCovariance):
        covariance = SpectralCovariance(np.asarray(covariance))
    return (covariance.z11 - covariance.z22) ** 2 + 4 * abs(covariance.z12) ** 2


def kernel_shift_entries(spectrum, omega0_grid):
    """Z11, Z22, Z12 of the K3 covariance at every kernel shift.

    The per-bin cross products are formed once; each shift only
    re-weights them.
    """
    if spectrum.channels != 2:
        raise ArityError(f'kernel scan needs 2 channels, got {spectrum.channels}')
    z1, z2 = spectrum.coeffs
    base = spectrum.weights / spectrum.samples ** 2
    cross = np.stack([base * np.abs(z1) ** 2,
                      base * np.abs(z2) ** 2,
                      base * z1 * z2.conj()], axis=1)
    omega0_grid = np.asarray(omega0_grid, dtype=float)
    out = np.empty((len(omega0_grid), 3), dtype=complex)
    for start in range(0, len(omega0_grid), _SCAN_CHUNK):
        shifts = omega0_grid[start:start + _SCAN_CHUNK, np.newaxis]
        kernels = 1 / (1 + np.abs(spectrum.omegas[np.newaxis, :] - shifts))
        out[start:start + len(shifts)] = kernels @ cross
    return out[:, 0].real, out[:, 1].real, out[:, 2]


def f1_curve(spectrum, omega0_grid):
    z11, z22, z12 = kernel_shift_entries(spectrum, omega0_grid)
    return (z11 - z22) ** 2 + 4 * np.abs(z12) ** 2


def _check_pair(z):
    if z.channels != 2:
        raise ArityError(f'second-step methods need exactly 2 channels, got {z.channels}')


def _ftpca(z, spectrum, kernel):
    covariance = spectral_covariance(spectrum, kernel)
    diagnostics = {'kernel': str(kernel),
                   'imag_error': abs(covariance.z12.imag),
                   'covariance': covariance}
    if isinstance(kernel, KernelSpec) and kernel.kind is KernelKind.K3:
        diagnostics['omega0'] = kernel.omega0
    return eigen_separation('FTPCA', covariance.entries.real, z,
                            degenerate=TrivialKernelError,
                            diagnostics=diagnostics)


def ftpca_fixed(z, kernel):
    """FT-PCA with a fixed kernel: eigenvectors of Re(spectral covariance)"""
    _check_pair(z)
    return _ftpca(z, dft(z), kernel)


def derivative_pca(z):
    """Eigenvectors of the derivative covariance (1/T) sum z' z'^T"""
    _check_pair(z)
    d = derivative(z).data
    return eigen_separation('DerivPCA', d @ d.T / z.samples, z,
                            degenerate=TrivialKernelError)


@dataclass(frozen=True, eq=False)
class HeuristicScan:
    omega0_grid: np.ndarray
    f1: np.ndarray
    argmin_omega0: float
    offset_steps: int
    candidates: tuple
    residuals: tuple = ()
    chosen_omega0: float = None
    failures: dict = field(default_factory=dict)


def kernel_shift_grid(step):
    """0, step, 2 step, ... up to pi"""
    if not step > 0:
        raise ValueError('omega0 grid step must be positive')
    return step * np.arange(int(math.floor(math.pi / step + 1e-9)) + 1)


def diagonality_residual(result):
    """|S12| / |S11 - S22| of the source-side covariance W C W^T"""
    covariance = result.diagnostics['covariance'].entries
    w = result.unmixing
    source_side = w @ covariance @ w.T
    return abs(source_side[0, 1]) / abs(source_side[0, 0].real - source_side[1, 1].real)


def heuristic_search(z, grid_step=0.001, offset_steps=100):
    """FT-PCA with the kernel shift picked from the f1 scan.

    f1 is minimized over the shift grid, then the two shifts
    offset_steps grid steps to either side are tried and the one whose
    decomposition leaves the smaller diagonality residual wins.
    """
    _check_pair(z)
    if offset_steps < 0:
        raise ValueError('offset_steps must be non-negative')
    spectrum = dft(z)
    grid = kernel_shift_grid(grid_step)
    f1 = f1_curve(spectrum, grid)
    argmin_omega0 = float(grid[int(np.argmin(f1))])
    offset = offset_steps * grid_step
    candidates = tuple(dict.fromkeys(
        min(max(argmin_omega0 + sign * offset, 0.0), math.pi) for sign in (-1, 1)))

    results, residuals, failures = [], [], {}
    for omega0 in candidates:
        try:
            result = _ftpca(z, spectrum, KernelSpec(KernelKind.K3, omega0))
        except TrivialKernelError as exc:
            failures[omega0] = str(exc)
            residuals.append(math.inf)
            results.append(None)
            continue
        results.append(result)
        residuals.append(diagonality_residual(result))

    best = int(np.argmin(residuals))
    scan = HeuristicScan(omega0_grid=grid, f1=f1, argmin_omega0=argmin_omega0,
                         offset_steps=offset_steps, candidates=candidates,
                         residuals=tuple(residuals),
                         chosen_omega0=candidates[best] if results[best] is not None else None,
                         failures=failures)
    if results[best] is None:
        raise NoValidKernelError(
            'no valid kernel shift: every candidate hit trivial-kernel '
            f'({", ".join(f"{c:.4f}" for c in candidates)})', scan=scan)
    result = results[best]
    result.diagnostics.update(residual=residuals[best], scan=scan)
    return scan, result


def source_statistics(spectrum, omega0_grid):
    """f2 = (S11 - S22)**2 and f3 = 4 |S12|**2 from known sources"""
    s11, s22, s12 = kernel_shift_entries(spectrum, omega0_grid)
    return (s11 - s22) ** 2, 4 * np.abs(s12) ** 2
