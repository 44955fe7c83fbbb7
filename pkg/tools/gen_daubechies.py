"""Regenerate the Daubechies low-pass tap table embedded in specslope.wavelet.

Uses spectral factorization at 60-digit precision: factor the half-band
polynomial P(y) = sum_k C(K-1+k, k) y^k, keep the roots of the induced
quadratic z^2 + (4y - 2) z + 1 = 0 that lie inside the unit circle
(extremal-phase choice), multiply back with the (1 + z)^K factor and
normalize so sum(h) = sqrt(2).

Run:  python tools/gen_daubechies.py
and paste the printed dict into src/specslope/wavelet.py.
"""

import mpmath as mp

mp.mp.dps = 60

SUPPORTED = range(1, 11)


def _polymul(a, b):
    out = [mp.mpf(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def lowpass_taps(vanishing_moments):
    k = vanishing_moments
    if k == 1:
        taps = [mp.mpf(1), mp.mpf(1)]
    else:
        # P(y), ascending powers; polyroots wants descending.
        pc = [mp.binomial(k - 1 + m, m) for m in range(k)]
        roots = mp.polyroots([mp.mpf(c) for c in reversed(pc)], maxsteps=500, extraprec=200)
        poly = [mp.mpf(1)]
        for _ in range(k):
            poly = _polymul(poly, [mp.mpf(1), mp.mpf(1)])
        for y in roots:
            b = 2 - 4 * y
            disc = mp.sqrt(b * b - 4)
            z1 = (b + disc) / 2
            z2 = (b - disc) / 2
            z = z1 if abs(z1) < 1 else z2
            poly = _polymul(poly, [-z, mp.mpf(1)])
        taps = [mp.re(c) for c in poly]
    s = sum(taps)
    taps = [c * mp.sqrt(2) / s for c in taps]
    # canonical published orientation (h[0] is the large leading tap)
    return list(reversed(taps))


def main():
    print("_DB_LOWPASS = {")
    for k in SUPPORTED:
        taps = lowpass_taps(k)
        body = ",\n        ".join(mp.nstr(t, 17) for t in taps)
        print(f"    {k}: (\n        {body},\n    ),")
    print("}")


if __name__ == "__main__":
    main()
