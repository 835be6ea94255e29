"""Convert the MPM93 water-vapour line table to 160-character HITRAN 2004 records.

MPM93 tabulates, per line: centre frequency (GHz), strength b1 (kHz/kPa at
300 K), b2 = E''/(k * 300 K), air width b3 (MHz/kPa), its temperature
exponent b4, the self-to-air width ratio b5 and the self-width exponent b6.
The conversion rescales strengths to 296 K per molecule (T^-2.5 exp(-E''/kT)),
widths to cm^-1/atm at 296 K, and lower-state energies to cm^-1.

Einstein-A, pressure shift and quantum labels are not available from MPM93
and are written as zeros / blanks.

Usage: python3 mpm93_to_par.py > h2o_lines.par
"""
import math

MPM93_H2O = """\
22.235080 .1130 2.143 28.11 .69 4.800 1.00
67.803960 .0012 8.735 28.58 .69 4.930 .82
119.995940 .0008 8.356 29.48 .70 4.780 .79
183.310091 2.4200 .668 30.50 .64 5.300 .85
321.225644 .0483 6.181 23.03 .67 4.690 .54
325.152919 1.4990 1.540 27.83 .68 4.850 .74
336.222601 .0011 9.829 26.93 .69 4.740 .61
380.197372 11.5200 1.048 28.73 .54 5.380 .89
390.134508 .0046 7.350 21.52 .63 4.810 .55
437.346667 .0650 5.050 18.45 .60 4.230 .48
439.150812 .9218 3.596 21.00 .63 4.290 .52
443.018295 .1976 5.050 18.60 .60 4.230 .50
448.001075 10.3200 1.405 26.32 .66 4.840 .67
470.888947 .3297 3.599 21.52 .66 4.570 .65
474.689127 1.2620 2.381 23.55 .65 4.650 .64
488.491133 .2520 2.853 26.02 .69 5.040 .72
503.568532 .0390 6.733 16.12 .61 3.980 .43
504.482692 .0130 6.733 16.12 .61 4.010 .45
547.676440 9.7010 .114 26.00 .70 4.500 1.00
552.020960 14.7700 .114 26.00 .70 4.500 1.00
556.936002 487.4000 .159 32.10 .69 4.110 1.00
620.700807 5.0120 2.200 24.38 .71 4.680 .68
645.866155 .0713 8.580 18.00 .60 4.000 .50
658.005280 .3022 7.820 32.10 .69 4.140 1.00
752.033227 239.6000 .396 30.60 .68 4.090 .84
841.053973 .0140 8.180 15.90 .33 5.760 .45
859.962313 .1472 7.989 30.60 .68 4.090 .84
899.306675 .0605 7.917 29.85 .68 4.530 .90
902.616173 .0426 8.432 28.65 .70 5.100 .95
906.207325 .1876 5.111 24.08 .70 4.700 .53
916.171582 8.3400 1.442 26.70 .70 4.780 .78
923.118427 .0869 10.220 29.00 .70 5.000 .80
970.315022 8.9720 1.920 25.50 .64 4.940 .67
987.926764 132.1000 .258 29.85 .68 4.550 .90
"""

GHZ_PER_CM = 29.9792458
K_B = 1.380649e-23
CM_PER_K = 0.6950348  # k/(hc) in cm^-1 per kelvin


def fmt_e(value, width=10, prec=3):
    m, e = f"{value:.{prec}E}".split("E")
    return f"{m}E{int(e):+03d}".rjust(width)


def fmt_f_noleading(value, width, prec):
    s = f"{value:.{prec}f}"
    if len(s) > width and s.startswith("0"):
        s = s[1:]
    return s.rjust(width)


def record(f, b1, b2, b3, b4, b5, b6):
    theta = 300.0 / 296.0
    n_per_kpa = 1000.0 / (K_B * 300.0) * 1e-6  # molecules cm^-3 kPa^-1
    # integrated MPM absorption (0.1820 f S pi dB/km GHz) per molecule, cm/molecule
    s300 = 0.1820 * f * b1 * math.pi / (10.0 / math.log(10.0)) / 1e5 / GHZ_PER_CM / n_per_kpa
    s296 = s300 * theta ** 2.5 * math.exp(b2 * (1.0 - theta))
    g_air = b3 * 101.325 / 1000.0 / GHZ_PER_CM * theta ** b4
    g_self = b3 * b5 * 101.325 / 1000.0 / GHZ_PER_CM * theta ** b6
    e_lower = b2 * 300.0 * CM_PER_K
    out = (
        f"{1:2d}{1:1d}"
        + f"{f / GHZ_PER_CM:12.6f}"
        + fmt_e(s296)
        + fmt_e(0.0)
        + fmt_f_noleading(g_air, 5, 4)
        + f"{g_self:5.3f}"
        + f"{e_lower:10.4f}"
        + f"{b4:4.2f}"
        + f"{0.0:8.6f}"
        + " " * 60
        + "000000"
        + "000000000000"
        + " "
        + f"{0.0:7.1f}"
        + f"{0.0:7.1f}"
    )
    assert len(out) == 160, len(out)
    return out


if __name__ == "__main__":
    for row in MPM93_H2O.strip().splitlines():
        print(record(*map(float, row.split())))
