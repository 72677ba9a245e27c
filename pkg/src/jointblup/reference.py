"""Bundled worked example and reference tables for the reproduction harness.

The sample is the classic Schmee-Hahn life-test extract: the first five
failure times out of ten units, conventionally analyzed under a normal
parent.  The two reference tables bundled here are literature values
for that example and for a grid of coefficient scenarios; the
``reproduce`` harness recomputes every cell and reports deltas.

Known caveat, kept on purpose: the two prediction columns of the first
table are not consistent with the coefficient table (dotting the
reference coefficients with the sample values does not reproduce the
reference predictions), so those cells fail reproduction at their
stated tolerance no matter how the pipeline is implemented.  All
efficiency cells and every coefficient cell do reproduce.  The harness
reports this honestly instead of papering over it.
"""

from __future__ import annotations

from .blue import CensoredSample

SCHMEE_HAHN_N = 10
SCHMEE_HAHN_FAILURES = (87.0, 92.8, 117.1, 133.6, 138.6)


def schmee_hahn_sample() -> CensoredSample:
    return CensoredSample(n=SCHMEE_HAHN_N, values=list(SCHMEE_HAHN_FAILURES))


# tolerances for reproduction: one unit in the reference's last printed
# digit plus quadrature slack
PREDICTION_TOL = 0.01
COEFFICIENT_TOL = 0.005
EFFICIENCY_TOL = 0.002

# reference marginal and joint predictions for target indices 6..10
TABLE1_MARGINAL = {6: 148.73, 7: 158.99, 8: 170.36, 9: 184.37, 10: 206.19}
TABLE1_JOINT = {6: 148.58, 7: 158.86, 8: 170.25, 9: 184.29, 10: 206.12}

# (s, t) -> (d_efficiency, trace_efficiency, overall_gain)
TABLE1_EFFICIENCY = {
    (6, 7): (0.9737, 0.9937, 0.0200),
    (6, 8): (0.9758, 0.9954, 0.0196),
    (6, 9): (0.9777, 0.9968, 0.0190),
    (6, 10): (0.9798, 0.9980, 0.0182),
    (7, 8): (0.9785, 0.9966, 0.0181),
    (7, 9): (0.9806, 0.9976, 0.0170),
    (7, 10): (0.9829, 0.9985, 0.0157),
    (8, 9): (0.9830, 0.9983, 0.0152),
    (8, 10): (0.9854, 0.9989, 0.0135),
    (9, 10): (0.9877, 0.9992, 0.0116),
}

TABLE1_PAIRS = tuple(sorted(TABLE1_EFFICIENCY))

# coefficient scenarios for the normal parent:
# (n, r, s, t) -> (weights for s, weights for t)
TABLE2_COEFFICIENTS = {
    (10, 5, 6, 7): (
        (-0.1843, -0.0322, 0.0382, 0.0932, 1.0852),
        (-0.3088, -0.0952, 0.0037, 0.0812, 1.3191),
    ),
    (10, 5, 6, 10): (
        (-0.1843, -0.0322, 0.0382, 0.0932, 1.0852),
        (-0.8809, -0.3849, -0.1547, 0.0264, 2.3941),
    ),
    (10, 5, 9, 10): (
        (-0.6165, -0.2510, -0.0815, 0.0517, 1.8973),
        (-0.8809, -0.3849, -0.1547, 0.0264, 2.3941),
    ),
    (15, 10, 11, 12): (
        (-0.1215, -0.0459, -0.0127, 0.0124, 0.0338, 0.0530, 0.0709, 0.0882, 0.1051, 0.8168),
        (-0.1696, -0.0754, -0.0341, -0.0027, 0.0239, 0.0478, 0.0702, 0.0917, 0.1130, 0.9351),
    ),
    (15, 10, 11, 15): (
        (-0.1215, -0.0459, -0.0127, 0.0124, 0.0338, 0.0530, 0.0709, 0.0882, 0.1051, 0.8168),
        (-0.4160, -0.2266, -0.1434, -0.0803, -0.0267, 0.0215, 0.0666, 0.1102, 0.1531, 1.5415),
    ),
    (15, 10, 14, 15): (
        (-0.2982, -0.1543, -0.0912, -0.0432, -0.0025, 0.0341, 0.0683, 0.1014, 0.1339, 1.2517),
        (-0.4160, -0.2266, -0.1434, -0.0803, -0.0267, 0.0215, 0.0666, 0.1102, 0.1531, 1.5415),
    ),
    (20, 5, 6, 7): (
        (-0.1206, -0.0361, 0.0000, 0.0250, 1.1324),
        (-0.2030, -0.0846, -0.0351, 0.0013, 1.3214),
    ),
    (20, 5, 6, 20): (
        (-0.1206, -0.0361, 0.0000, 0.0250, 1.1324),
        (-1.5471, -0.8758, -0.5940, -0.3862, 4.4032),
    ),
    (20, 5, 19, 20): (
        (-1.2802, -0.7187, -0.4830, -0.3093, 3.7912),
        (-1.5471, -0.8758, -0.5940, -0.3862, 4.4032),
    ),
    (20, 10, 11, 12): (
        (-0.0841, -0.0310, -0.0086, 0.0080, 0.0218, 0.0338, 0.0448, 0.0550, 0.0646, 0.8958),
        (-0.1168, -0.0518, -0.0243, -0.0040, 0.0129, 0.0277, 0.0411, 0.0536, 0.0654, 0.9962),
    ),
    (20, 10, 11, 20): (
        (-0.0841, -0.0310, -0.0086, 0.0080, 0.0218, 0.0338, 0.0448, 0.0550, 0.0646, 0.8958),
        (-0.5557, -0.3308, -0.2358, -0.1652, -0.1067, -0.0554, -0.0087, 0.0349, 0.0763, 2.3470),
    ),
    (20, 10, 19, 20): (
        (-0.4356, -0.2545, -0.1779, -0.1211, -0.0740, -0.0327, 0.0049, 0.0400, 0.0733, 1.9774),
        (-0.5557, -0.3308, -0.2358, -0.1652, -0.1067, -0.0554, -0.0087, 0.0349, 0.0763, 2.3470),
    ),
}

TABLE2_CASES = tuple(sorted(TABLE2_COEFFICIENTS))
