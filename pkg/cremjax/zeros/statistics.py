"""Point-process statistics of zero sets: weighted counts, spacings, local and boundary frames."""

import cmath
import math
from typing import Dict, List, Optional, Union

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from cremjax.analytic.zeta import sample_zetap, zetap_capped_horizon, zetap_handle
from cremjax.core.phases import SQRT2, SQRT_HALF, classify
from cremjax.core.xi_measure import CompactField
from cremjax.errors import (
    ExcludedTriangleError,
    InsufficientZerosError,
    SupportError,
    WindowError,
)
from cremjax.partition.frames import (
    DEFAULT_BOUNDARY12_ANGLE,
    Frame,
    frame_handle,
    frame_map,
    partition_handle,
)
from cremjax.sampling.gaussian import gaussian_pairs
from cremjax.types import ComplexParam, PhaseLabel, Purpose, Rectangle, RemConfig, SampleBatch, SeedPath
from cremjax.zeros.handles import AnalyticHandle, Disk
from cremjax.zeros.locate import ZeroSet, locate_zeros, zeros_in_disk


def empirical_zero_measure(zs: ZeroSet, f: CompactField, n: float) -> float:
    """(1/n) sum over zeros of f(z), multiplicities counted.

    Raises:
        SupportError: if the support of f is not inside the certified region of zs
    """
    region = zs.region
    if isinstance(region, Disk):
        region = None
    # the margin absorbs the jitter applied to windows with boundary zeros
    if region is None or not all(bool(region.contains(c, margin=1e-6)) for c in f.support.corners()):
        raise SupportError(f"The support {f.support} of {f.name} escapes the certified region {zs.region}")
    if len(zs) == 0:
        return 0.0
    values = np.asarray(f(zs.zeros), dtype=float)
    return float(np.sum(values * zs.multiplicities)) / n


def spacing_stats(
    zs: ZeroSet,
    direction: complex,
    band: Optional[float] = None,
) -> np.ndarray:
    """Consecutive gaps of the zeros projected on a unit direction.

    With a band half-width, zeros whose coordinate orthogonal to the direction is farther than band
    from the median are dropped first.

    Raises:
        InsufficientZerosError: with fewer than 3 zeros left
    """
    direction = complex(direction)
    assert abs(direction) > 0, "The direction must be non-zero"
    direction = direction / abs(direction)
    rotated = np.asarray(zs.zeros) * np.conj(direction)
    along, across = rotated.real, rotated.imag
    if band is not None and len(along):
        keep = np.abs(across - np.median(across)) <= band
        along = along[keep]
    if len(along) < 3:
        raise InsufficientZerosError(f"Spacings need at least 3 zeros, got {len(along)}")
    return np.diff(np.sort(along))


def nearest_neighbor_distances(zs: ZeroSet) -> np.ndarray:
    z = np.asarray(zs.zeros)
    if len(z) < 2:
        return np.zeros(0)
    distances = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(distances, np.inf)
    return distances.min(axis=1)


def distance_to_b3_boundary(beta0: ComplexParam) -> float:
    """A lower bound on the distance from a B3 point to the boundary of B3."""
    return min(abs(beta0.beta) - 1.0, SQRT_HALF - abs(beta0.sigma))


def local_zero_process(
    batch: SampleBatch,
    n: float,
    beta0: Union[ComplexParam, complex],
    radius: float,
) -> ZeroSet:
    """Zeros of Z_N in the disk |beta - beta0| <= radius / sqrt(n), as t = sqrt(n) (beta - beta0).

    Raises:
        WindowError: if beta0 is not in B3 or the disk reaches the boundary of B3
    """
    beta0 = ComplexParam.parse(beta0)
    if classify(beta0) != PhaseLabel.B3:
        raise WindowError(f"The local zero process needs beta0 in B3, got {beta0}")
    margin = distance_to_b3_boundary(beta0)
    if radius / math.sqrt(n) >= margin:
        raise WindowError(
            f"The window of radius {radius}/sqrt(n) = {radius / math.sqrt(n):.4f} reaches the boundary of B3 (distance {margin:.4f})"
        )
    frame = {"frame": Frame.sqrt_n_B3.value, "beta0": beta0.beta, "n": n}
    if radius <= 0:
        return ZeroSet.empty(region=Disk(0j, 0.0), frame=frame)
    h = frame_handle(batch, n, beta0, Frame.sqrt_n_B3, domain=Disk(0j, radius))
    return zeros_in_disk(h, 0j, radius).replace(frame=frame)


# ================ Boundary lattices ================


def lattice_direction(
    beta0: Union[ComplexParam, complex],
    n: float,
    frame: Union[Frame, str],
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
    coordinate: str = "t",
) -> complex:
    """Unit direction of the arithmetic progression of zeros, in the frame coordinate t or in beta."""
    frame = Frame(frame)
    if frame == Frame.boundary13:
        direction = 1j
    elif frame == Frame.boundary12:
        direction = 1j * cmath.exp(1j * (angle - 3 * math.pi / 4))
    else:
        raise ValueError(f"Frame {frame.value} carries no zero lattice")
    if coordinate == "beta":
        _, scale = frame_map(beta0, n, frame, angle)
        direction *= scale / abs(scale)
    return direction


def lattice_spacing(
    beta0: Union[ComplexParam, complex],
    n: float,
    frame: Union[Frame, str],
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
    coordinate: str = "t",
) -> float:
    """Gap of the progression: 2 pi in t (2 pi |beta0| / n in beta) on B1|B3,
    2 pi / (sqrt 2 tau0) in t (2 pi / (sqrt 2 tau0 n) in beta) on B1|B2."""
    beta0 = ComplexParam.parse(beta0)
    frame = Frame(frame)
    _, scale = frame_map(beta0, n, frame, angle)
    if frame == Frame.boundary13:
        gap = 2 * math.pi
    elif frame == Frame.boundary12:
        gap = 2 * math.pi / (SQRT2 * beta0.tau)
    else:
        raise ValueError(f"Frame {frame.value} carries no zero lattice")
    return gap * abs(scale) if coordinate == "beta" else gap


def boundary_lattice_zeros(
    batch: SampleBatch,
    n: float,
    beta0: Union[ComplexParam, complex],
    frame: Union[Frame, str],
    periods: int = 6,
    half_width: float = 6.0,
    angle: float = DEFAULT_BOUNDARY12_ANGLE,
) -> ZeroSet:
    """Zeros of the boundary frame process in a window spanning `periods` lattice gaps.

    The window is the rectangle |Re u| <= half_width, |Im u| <= periods * gap / 2 in the coordinate
    u = t / e^{i(angle - 3 pi / 4)} (u = t on B1|B3), in which the lattice runs along the imaginary
    axis. Zeros are returned in the frame coordinate t.
    """
    beta0 = ComplexParam.parse(beta0)
    frame = Frame(frame)
    gap = lattice_spacing(beta0, n, frame, angle)
    rotation = lattice_direction(beta0, n, frame, angle) / 1j
    base = frame_handle(batch, n, beta0, frame, angle=angle)
    window = Rectangle(-half_width, half_width, -0.5 * periods * gap, 0.5 * periods * gap)
    rotated = AnalyticHandle(
        eval=lambda u: base(rotation * np.asarray(u)),
        deriv=lambda u: rotation * base.derivative(rotation * np.asarray(u)),
        domain=window,
        name=f"{base.name}[{frame.value}]",
    )
    zs = locate_zeros(rotated, window)
    descriptor = {"frame": frame.value, "beta0": beta0.beta, "n": n, "angle": angle}
    return zs.mapped(0j, rotation, frame=descriptor)


# ================ B2: comparison with the Poisson zeta function ================


def check_b2_region(region: Rectangle) -> bool:
    """True for a region in the mirrored half sigma < -1/sqrt(2), False for sigma > 1/sqrt(2).

    Raises:
        ExcludedTriangleError: if the region meets the triangle sigma > 1/sqrt(2), |sigma| + |tau| < sqrt(2)
        WindowError: if the region is not inside B2
    """
    mirrored = region.sigma_max < -SQRT_HALF
    right = region.mirrored_sigma() if mirrored else region
    if right.sigma_min <= SQRT_HALF:
        raise WindowError(f"Region {region} is not inside B2")
    # the minimum of sigma + |tau| over the rectangle
    tau_min_abs = 0.0 if right.tau_min <= 0 <= right.tau_max else min(abs(right.tau_min), abs(right.tau_max))
    if right.sigma_min + tau_min_abs <= SQRT2:
        raise ExcludedTriangleError(
            f"Region {region} meets the triangle sigma > 1/sqrt(2), |sigma| + |tau| < sqrt(2): "
            "the approximation breaks down in the triangle"
        )
    return mirrored


def _zetap_zeros_in_region(region: Rectangle, horizon: float, seed_path: SeedPath) -> ZeroSet:
    sample = sample_zetap(horizon, seed_path)
    return locate_zeros(zetap_handle(sample, scale=1.0 / SQRT2, domain=region), region)


def _compare_replica(cfg: RemConfig, region: Rectangle, mirrored: bool, horizon: float, r: int):
    batch = gaussian_pairs(cfg, r)
    zs_rem = locate_zeros(partition_handle(batch, cfg.n, domain=region, reference_sigma=region.center.real), region)
    zs_mirror = locate_zeros(
        partition_handle(batch, cfg.n, domain=region.mirrored_sigma(), reference_sigma=-region.center.real),
        region.mirrored_sigma(),
    )
    right = region.mirrored_sigma() if mirrored else region
    purpose = Purpose.ZETA_MIRROR if mirrored else Purpose.ZETA
    zs_zeta = _zetap_zeros_in_region(right, horizon, SeedPath(seed=cfg.seed, replica=r, purpose=int(purpose)))
    return zs_rem, zs_mirror, zs_zeta


def zetap_zero_compare(
    cfg: RemConfig,
    region: Union[Rectangle, str],
    replicas: int,
    tol: float = 1e-3,
    n_jobs: int = 1,
) -> Dict:
    """Zero counts of Z_N in a B2 region against those of zeta_P(beta / sqrt 2), on independent replicas.

    Each replica draws a fresh batch (ρ = 1) and an independent zeta_P sample. The summary holds the
    two-sample KS comparison of the counts and of the nearest-neighbor distances, and the correlation
    between the counts in the region and in its mirror image sigma -> -sigma on the same batches.
    """
    region = Rectangle.parse(region)
    mirrored = check_b2_region(region)
    assert cfg.rho == 1.0, f"The zeta comparison needs rho = 1, got {cfg.rho}"
    right = region.mirrored_sigma() if mirrored else region
    horizon, tol_met = zetap_capped_horizon(complex(right.sigma_min / SQRT2, 0.0), tol)
    results = Parallel(n_jobs=n_jobs, prefer="threads")(
        delayed(_compare_replica)(cfg, region, mirrored, horizon, r) for r in range(replicas)
    )
    counts_rem = np.array([r[0].total_multiplicity for r in results])
    counts_mirror = np.array([r[1].total_multiplicity for r in results])
    counts_zeta = np.array([r[2].total_multiplicity for r in results])
    nn_rem = np.concatenate([nearest_neighbor_distances(r[0]) for r in results] + [np.zeros(0)])
    nn_zeta = np.concatenate([nearest_neighbor_distances(r[2]) for r in results] + [np.zeros(0)])
    ks_counts = stats.ks_2samp(counts_rem, counts_zeta)
    summary = {
        "region": region.to_tuple(),
        "mirrored": mirrored,
        "horizon": horizon,
        "tol_met": tol_met,
        "mean_count_rem": float(counts_rem.mean()),
        "mean_count_zeta": float(counts_zeta.mean()),
        "ks_counts_statistic": float(ks_counts.statistic),
        "ks_counts_pvalue": float(ks_counts.pvalue),
        "counts_rem": counts_rem,
        "counts_zeta": counts_zeta,
        "counts_mirror": counts_mirror,
    }
    if len(nn_rem) and len(nn_zeta):
        ks_nn = stats.ks_2samp(nn_rem, nn_zeta)
        summary["ks_spacing_statistic"] = float(ks_nn.statistic)
        summary["ks_spacing_pvalue"] = float(ks_nn.pvalue)
    if counts_rem.std() > 0 and counts_mirror.std() > 0:
        summary["mirror_count_corr"] = float(np.corrcoef(counts_rem, counts_mirror)[0, 1])
    return summary


# ================ Densities ================


def zero_density_histogram(zero_sets: List[ZeroSet], window: Rectangle, bins: int, n: float) -> Dict:
    """Mean number of zeros per unit area and per replica on a bins x bins partition of the window,
    next to the limiting density n Xi / (2 pi) = n / pi inside B3."""
    sigma_edges = np.linspace(window.sigma_min, window.sigma_max, bins + 1)
    tau_edges = np.linspace(window.tau_min, window.tau_max, bins + 1)
    total = np.zeros((bins, bins))
    for zs in zero_sets:
        if len(zs):
            counts, _, _ = np.histogram2d(
                zs.zeros.real, zs.zeros.imag, bins=[sigma_edges, tau_edges], weights=zs.multiplicities
            )
            total += counts
    cell_area = (sigma_edges[1] - sigma_edges[0]) * (tau_edges[1] - tau_edges[0])
    return {
        "sigma_edges": sigma_edges,
        "tau_edges": tau_edges,
        "density": total / (max(len(zero_sets), 1) * cell_area),
        "b3_reference": n / math.pi,
    }
