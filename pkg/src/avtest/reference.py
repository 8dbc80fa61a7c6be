"""Published reference values used by the table-reproduction workflow.

Families are keyed by :class:`AltFamily` value; EMNW entries use ``beta = 3``.
Power tables map ``(family, theta, k)`` to rejection rates at
``POWER_ALPHAS``; all simulations were reported at ``n = 100`` with 10^4
replicates.
"""

POWER_ALPHAS = (0.05, 0.025, 0.01)
CRITICAL_ALPHAS = (0.1, 0.05, 0.01, 0.005)
FAMILIES = ("makeham", "weibull", "gamma", "emnw")
POWER_THETAS = (0.5, 0.25)
POWER_ORDERS = (2, 3, 4)
SIM_N = 100
SIM_REPLICATES = 10_000

EFFICIENCY = {
    ("integral", 2): {"makeham": 0.448, "weibull": 0.621, "gamma": 0.723, "emnw": 0.694},
    ("integral", 3): {"makeham": 0.573, "weibull": 0.664, "gamma": 0.708, "emnw": 0.799},
    ("kolmogorov", 2): {"makeham": 0.125, "weibull": 0.092, "gamma": 0.093, "emnw": 0.149},
    ("kolmogorov", 3): {"makeham": 0.216, "weibull": 0.152, "gamma": 0.138, "emnw": 0.230},
}

# maximal integral-statistic efficiency over k: family -> (k*, efficiency)
BEST_K = {"makeham": (14, 0.875), "weibull": (8, 0.710), "gamma": (2, 0.723), "emnw": (6, 0.885)}

CRITICAL_VALUES = {
    2: {0.1: 0.305, 0.05: 0.313, 0.01: 0.328, 0.005: 0.334},
    3: {0.1: 0.446, 0.05: 0.455, 0.01: 0.473, 0.005: 0.481},
}

POWER_INTEGRAL = {
    ("makeham", 0.5, 2): (0.1768, 0.1212, 0.0612),
    ("makeham", 0.5, 3): (0.2205, 0.1306, 0.0706),
    ("makeham", 0.5, 4): (0.2398, 0.1532, 0.0772),
    ("makeham", 0.25, 2): (0.1091, 0.0653, 0.0294),
    ("makeham", 0.25, 3): (0.1171, 0.0679, 0.0338),
    ("makeham", 0.25, 4): (0.1392, 0.0705, 0.0347),
    ("weibull", 0.5, 2): (0.9963, 0.9914, 0.9752),
    ("weibull", 0.5, 3): (0.9977, 0.9942, 0.9839),
    ("weibull", 0.5, 4): (0.9987, 0.9965, 0.9864),
    ("weibull", 0.25, 2): (0.7166, 0.6456, 0.5049),
    ("weibull", 0.25, 3): (0.7626, 0.6456, 0.5049),
    ("weibull", 0.25, 4): (0.7940, 0.6813, 0.5309),
    ("gamma", 0.5, 2): (0.8456, 0.7736, 0.6187),
    ("gamma", 0.5, 3): (0.8453, 0.7528, 0.6198),
    ("gamma", 0.5, 4): (0.8528, 0.7577, 0.6084),
    ("gamma", 0.25, 2): (0.4108, 0.3179, 0.1854),
    ("gamma", 0.25, 3): (0.4201, 0.2940, 0.1836),
    ("gamma", 0.25, 4): (0.4323, 0.3046, 0.1813),
    ("emnw", 0.5, 2): (0.9892, 0.9736, 0.9262),
    ("emnw", 0.5, 3): (0.9841, 0.9591, 0.9097),
    ("emnw", 0.5, 4): (0.9792, 0.9502, 0.8893),
    ("emnw", 0.25, 2): (0.4476, 0.3454, 0.2098),
    ("emnw", 0.25, 3): (0.4723, 0.3398, 0.2191),
    ("emnw", 0.25, 4): (0.4820, 0.3577, 0.2173),
}

POWER_KOLMOGOROV = {
    ("makeham", 0.5, 2): (0.0885, 0.0472, 0.0221),
    ("makeham", 0.5, 3): (0.1027, 0.0609, 0.0246),
    ("makeham", 0.5, 4): (0.1136, 0.0681, 0.0304),
    ("makeham", 0.25, 2): (0.0669, 0.0315, 0.0154),
    ("makeham", 0.25, 3): (0.0724, 0.0399, 0.0164),
    ("makeham", 0.25, 4): (0.0842, 0.0475, 0.0206),
    ("weibull", 0.5, 2): (0.6967, 0.5721, 0.4423),
    ("weibull", 0.5, 3): (0.8194, 0.7431, 0.6006),
    ("weibull", 0.5, 4): (0.8903, 0.8287, 0.7190),
    ("weibull", 0.25, 2): (0.2969, 0.1964, 0.1169),
    ("weibull", 0.25, 3): (0.3698, 0.2745, 0.1566),
    ("weibull", 0.25, 4): (0.4286, 0.3308, 0.2054),
    ("gamma", 0.5, 2): (0.4146, 0.2901, 0.1849),
    ("gamma", 0.5, 3): (0.5026, 0.3887, 0.2405),
    ("gamma", 0.5, 4): (0.5555, 0.4433, 0.3006),
    ("gamma", 0.25, 2): (0.1852, 0.1135, 0.0630),
    ("gamma", 0.25, 3): (0.2163, 0.1437, 0.0695),
    ("gamma", 0.25, 4): (0.2406, 0.1628, 0.0841),
    ("emnw", 0.5, 2): (0.7083, 0.5769, 0.4352),
    ("emnw", 0.5, 3): (0.7918, 0.6936, 0.5294),
    ("emnw", 0.5, 4): (0.8409, 0.7581, 0.6121),
    ("emnw", 0.25, 2): (0.2080, 0.1294, 0.0718),
    ("emnw", 0.25, 3): (0.2456, 0.1658, 0.0817),
    ("emnw", 0.25, 4): (0.2849, 0.1964, 0.1083),
}

# Weibull theta = 0.25, k = 2 at alpha 0.025 / 0.01 repeats the k = 3 row verbatim
SUSPECT_POWER_CELLS = frozenset({("weibull", 0.25, 2, 0.025), ("weibull", 0.25, 2, 0.01)})

# sup_t delta_k^2(t): k -> (argmax, value)
SUP_DELTA_SQ = {2: (1.502, 0.02234), 3: (1.919, 0.02241)}

# Makeham Kolmogorov drift: k -> (argmax, sup value)
MAKEHAM_SUP_B = {2: (1.908, 0.03055), 3: (2.087, 0.0602)}
