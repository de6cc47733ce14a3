# config.py - library defaults
#
# The command line overrides these through flags; only the web service
# (app.py / api.py) reads the environment.
import os

# Largest N accepted by partial_sum_exact; past it callers use ball evaluation
EXACT_SUM_CAP = 100_000

# Extra decimal digits carried by every ball computation
GUARD_DIGITS = 10

# Hard cap on requested digits. Evaluation beyond a few thousand digits
# takes minutes because the Euler-Maclaurin tail needs about digits/2
# correction terms on exact rationals.
MAX_DIGITS = 10_000
DEFAULT_DIGITS = 30
NUMERIC_VERIFY_DIGITS = 50

DEFAULT_MAX_TERMS = 1_000_000
MAX_SCAN_TERMS = 10_000_000

# evaluate() sums directly only when the tail bound is met within this many terms
DIRECT_SUM_LIMIT = 5_000

BUILTIN_LEDGER_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'ledger_builtin.json')

DEFAULT_DISCOVER_POOL = 'n,2n-1,4n-3,4n-1,4n+1'
