"""Orthogonal discrete wavelet transform of dyadic-length signals.

Implements the filter-and-decimate pyramid with Daubechies extremal-phase
filters and periodic (circular) boundary handling. Periodic boundaries keep
the transform exactly orthogonal, which the energy spectra downstream rely
on (Parseval holds to rounding error, and `idwt` inverts `dwt` exactly).

Levels are indexed by dyadic scale ``j``: a length ``2**J`` signal
decomposed over ``num_levels`` steps yields detail vectors ``d_j`` of
length ``2**j`` for ``j = J-1`` (finest) down to ``J - num_levels``
(coarsest), plus one smooth vector of the coarsest length.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InputDataError, ParameterError, StructureError

# Low-pass taps for 1..10 vanishing moments (2K taps each), computed by
# spectral factorization at 60-digit precision; see tools/gen_daubechies.py.
_DB_LOWPASS = {
    1: (
        0.70710678118654752,
        0.70710678118654752,
    ),
    2: (
        0.48296291314453414,
        0.83651630373780791,
        0.22414386804201338,
        -0.12940952255126038,
    ),
    3: (
        0.33267055295008262,
        0.80689150931109258,
        0.45987750211849157,
        -0.13501102001025459,
        -0.085441273882026662,
        0.035226291885709537,
    ),
    4: (
        0.2303778133088965,
        0.71484657055291565,
        0.63088076792985891,
        -0.027983769416859854,
        -0.18703481171909308,
        0.030841381835560764,
        0.0328830116668852,
        -0.010597401785069032,
    ),
    5: (
        0.16010239797419291,
        0.60382926979718967,
        0.72430852843777293,
        0.13842814590132073,
        -0.24229488706638203,
        -0.032244869584638375,
        0.077571493840045714,
        -0.0062414902127982743,
        -0.012580751999081999,
        0.0033357252854737713,
    ),
    6: (
        0.11154074335010946,
        0.49462389039845309,
        0.75113390802109535,
        0.31525035170919763,
        -0.22626469396543982,
        -0.12976686756726194,
        0.097501605587323049,
        0.027522865530305729,
        -0.03158203931748603,
        0.00055384220116149614,
        0.0047772575109455106,
        -0.0010773010853084796,
    ),
    7: (
        0.077852054085009179,
        0.39653931948191731,
        0.72913209084623512,
        0.46978228740519312,
        -0.14390600392856498,
        -0.22403618499387498,
        0.071309219266830265,
        0.080612609151083072,
        -0.038029936935014414,
        -0.016574541630666881,
        0.012550998556099841,
        0.00042957797292136652,
        -0.0018016407040474909,
        0.00035371379997452025,
    ),
    8: (
        0.05441584224310401,
        0.31287159091429997,
        0.67563073629728981,
        0.58535468365420671,
        -0.015829105256349306,
        -0.28401554296154693,
        0.00047248457391328277,
        0.12874742662047846,
        -0.017369301001807546,
        -0.044088253930794752,
        0.013981027917398282,
        0.0087460940474057767,
        -0.0048703529934515743,
        -0.00039174037337694705,
        0.00067544940645056937,
        -0.00011747678412476953,
    ),
    9: (
        0.038077947363878347,
        0.24383467461259035,
        0.60482312369011111,
        0.65728807805130054,
        0.13319738582500758,
        -0.29327378327917491,
        -0.096840783222976461,
        0.14854074933810638,
        0.030725681479333379,
        -0.067632829061329974,
        0.00025094711483145196,
        0.022361662123679097,
        -0.0047232047577513973,
        -0.0042815036824634298,
        0.0018476468830562265,
        0.00023038576352319597,
        -0.00025196318894271014,
        3.9347320316271599e-5,
    ),
    10: (
        0.026670057900555554,
        0.18817680007769149,
        0.52720118893172559,
        0.68845903945360357,
        0.28117234366057746,
        -0.24984642432731538,
        -0.19594627437737704,
        0.12736934033579326,
        0.093057364603572351,
        -0.071394147166397087,
        -0.029457536821875813,
        0.033212674059341002,
        0.0036065535669561697,
        -0.010733175483330575,
        0.0013953517470529012,
        0.0019924052951850561,
        -0.00068585669495971163,
        -0.00011646685512928545,
        9.3588670320069591e-5,
        -1.3264202894521245e-5,
    ),
}

SUPPORTED_ORDERS = tuple(sorted(_DB_LOWPASS))


@dataclass(frozen=True, eq=False)
class FilterPair:
    """An orthonormal low-pass/high-pass analysis filter pair.

    ``high_pass`` is the quadrature mirror of ``low_pass``:
    ``g[k] = (-1)**k * h[L-1-k]``.
    """

    name: str
    vanishing_moments: int
    low_pass: np.ndarray
    high_pass: np.ndarray

    def __repr__(self):
        return f"FilterPair({self.name!r}, taps={self.low_pass.size})"


def daubechies_filter(vanishing_moments: int) -> FilterPair:
    """Return the Daubechies filter pair with the given number of vanishing moments."""
    if vanishing_moments not in _DB_LOWPASS:
        raise ParameterError(
            f"unsupported Daubechies order {vanishing_moments!r}; "
            f"supported orders are {SUPPORTED_ORDERS[0]}..{SUPPORTED_ORDERS[-1]}"
        )
    h = np.array(_DB_LOWPASS[vanishing_moments], dtype=np.float64)
    taps = h.size
    g = np.array([(-1.0) ** k * h[taps - 1 - k] for k in range(taps)])
    return FilterPair(
        name=f"db{vanishing_moments}",
        vanishing_moments=vanishing_moments,
        low_pass=h,
        high_pass=g,
    )


@dataclass(eq=False)
class WaveletDecomposition:
    """Pyramid output: one smooth vector plus details keyed by scale index."""

    smooth: np.ndarray
    details: dict = field(default_factory=dict)
    signal_length: int = 0
    filter: FilterPair = None
    coarsest_level: int = 0

    @property
    def levels(self):
        """Detail scale indices, coarsest first."""
        return tuple(sorted(self.details))

    @property
    def num_levels(self):
        return len(self.details)

    def copy(self):
        return WaveletDecomposition(
            smooth=self.smooth.copy(),
            details={j: d.copy() for j, d in self.details.items()},
            signal_length=self.signal_length,
            filter=self.filter,
            coarsest_level=self.coarsest_level,
        )


def _dyadic_exponent(n: int) -> int:
    j = n.bit_length() - 1
    if n <= 0 or (1 << j) != n:
        raise InputDataError(f"signal length {n} is not a power of two")
    return j


def dwt(signal, filter_pair: FilterPair, num_levels: int) -> WaveletDecomposition:
    """Decompose a dyadic-length signal over ``num_levels`` pyramid steps."""
    x = np.ascontiguousarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise InputDataError("signal must be one-dimensional")
    j_top = _dyadic_exponent(x.size)
    if not 1 <= num_levels <= j_top - 1:
        raise ParameterError(
            f"num_levels must be in 1..{j_top - 1} for a length-{x.size} signal, got {num_levels}"
        )
    h = filter_pair.low_pass
    g = filter_pair.high_pass
    details = {}
    approx = x
    for step in range(num_levels):
        approx, detail = _kernels.pyramid_step(approx, h, g)
        details[j_top - 1 - step] = detail
    return WaveletDecomposition(
        smooth=approx,
        details=details,
        signal_length=x.size,
        filter=filter_pair,
        coarsest_level=j_top - num_levels,
    )


def idwt(decomp: WaveletDecomposition) -> np.ndarray:
    """Reconstruct the signal; exact inverse of :func:`dwt` up to rounding."""
    h = decomp.filter.low_pass
    g = decomp.filter.high_pass
    approx = np.ascontiguousarray(decomp.smooth, dtype=np.float64)
    for j in decomp.levels:
        detail = np.ascontiguousarray(decomp.details[j], dtype=np.float64)
        if detail.size != approx.size:
            raise StructureError(
                f"detail level {j} has {detail.size} coefficients, expected {approx.size}"
            )
        approx = _kernels.inverse_pyramid_step(approx, detail, h, g)
    if approx.size != decomp.signal_length:
        raise StructureError(
            f"reconstruction length {approx.size} does not match "
            f"recorded signal length {decomp.signal_length}"
        )
    return approx
