# Published reference values for taxi walks.
# Used as the golden table for c_n and as targets for full-scale runs.

from decimal import Decimal

# c_n, the number of taxi walks of length n from the origin (n = 1..60)
PUBLISHED_WALK_COUNTS = {
    1: 2, 2: 4, 3: 6, 4: 10, 5: 16, 6: 26, 7: 42, 8: 68, 9: 110, 10: 178,
    11: 288, 12: 460, 13: 740, 14: 1192, 15: 1918, 16: 3064, 17: 4910,
    18: 7872, 19: 12620, 20: 20114, 21: 32150, 22: 51396, 23: 82160,
    24: 130730, 25: 208506, 26: 332616, 27: 530588, 28: 843222, 29: 1342662,
    30: 2138280, 31: 3405346, 32: 5406522, 33: 8597632, 34: 13674278,
    35: 21748530, 36: 34501460, 37: 54807754, 38: 87077354, 39: 138346766,
    40: 219324398, 41: 348109128, 42: 552582790, 43: 877163942,
    44: 1389806294, 45: 2204289314, 46: 3496483316, 47: 5546212122,
    48: 8783360626, 49: 13922238632, 50: 22069957494, 51: 34986181158,
    52: 55383388278, 53: 87740467384, 54: 139014623272, 55: 220254102104,
    56: 348536652664, 57: 551914140382, 58: 874039817792, 59: 1384184997874,
    60: 2189670407434,
}

PUBLISHED_B60 = 80312795498

# Number of distinct taxi-polygon words of length <= max_len
PUBLISHED_POLYGON_COUNTS = {44: 1721326, 48: 8009144}

# Example taxi-polygon words (word -> polygon length)
PUBLISHED_POLYGON_WORDS = {
    "sstsstsstss": 12,
    "tstsstsssstsssstsst": 20,
}

PUBLISHED_DIMENSION_C20 = 20114

# Headline bounds, as printed (mu and lambda = mu^4 - 1)
PUBLISHED_BOUNDS = {
    "subadditive": {"n": 60, "mu": Decimal("1.60574"), "lambda": Decimal("5.6482"), "direction": "upper"},
    "alm": {"m": 20, "n": 60, "mu": Decimal("1.58834"), "lambda": Decimal("5.3646"), "direction": "upper"},
    "gj": {"polygon_max": 44, "n": 802, "mu": Decimal("1.58746"), "lambda": Decimal("5.3506"), "direction": "upper"},
    "bridge": {"n": 60, "mu": Decimal("1.51965"), "lambda": Decimal("4.3330"), "direction": "lower"},
    "irreducible": {"N": 60, "mu": Decimal("1.55701"), "lambda": Decimal("4.8771"), "direction": "lower"},
}

GOLDEN_RATIO_LAMBDA = Decimal("5.8542")  # (5 + 3*sqrt(5)) / 2, rounded up
