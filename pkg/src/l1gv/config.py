"""Shared knobs. Logs are base 2 everywhere."""
import logging
import math
import os

ENUM_CAP = 10 ** 6
DP_CAP = 40

NEWTON_TOL = 1e-12       # solver convergence on max |equation|
ACCEPT_TOL = 1e-9        # residual acceptance for a CriticalSolution
ROOT_SCAN_STEP = 1e-3
ROOT_POLISH_TOL = 1e-13
FIXED_POINT_TOL = 1e-11
MIN_COMPONENT = 1e-10   # smaller solver coordinates are treated as boundary artifacts


def log2(x):
    return math.log2(x)


def xlog2(x):
    """x * log2(x) with 0 log 0 = 0."""
    return 0.0 if x == 0 else x * math.log2(x)


def entropy(p):
    """Binary entropy in bits, H(0) = H(1) = 0."""
    if p < 0 or p > 1:
        raise ValueError(f"entropy argument {p} outside [0, 1]")
    return -xlog2(p) - xlog2(1.0 - p)


def get_logger(name="l1gv"):
    log = logging.getLogger(name)
    if not log.handlers:
        h = logging.StreamHandler()
        h.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        log.addHandler(h)
    level = os.environ.get("GV_LOG_LEVEL", "error").upper()
    log.setLevel(getattr(logging, level, logging.ERROR))
    return log
