"""Enumeration guards and default sampling scopes.

Every size limit used by the library lives here so the exact cost envelope of
a run is visible in one place.
"""

# channel: refuse ball enumerations with more candidate grids than this
MAX_BALL_CANDIDATES = 2**26
# channel: largest result dimension for a materialised insertion ball
MAX_INSERTION_DIM = 6

# vt: q**m words in a coset census
MAX_VT_WORDS = 2**24

# code: constrained sub-region state space for count_structural
MAX_STRUCTURAL_STATES = 2**24

# analysis: 2**(n*n) arrays in a census (n <= 5)
MAX_CENSUS_ARRAYS = 2**25
CENSUS_CHUNK = 2**20

# verify
DEFAULT_SAMPLED_PAIRS = 10_000
MAX_EXHAUSTIVE_EQUIVALENCE_M = 3
MAX_SAMPLED_EQUIVALENCE_M = 4
MAX_DELPATTERN_EXHAUSTIVE_N = 4
DEFAULT_ORACLE_CASES = 100

# code: rejection-sampling caps (exceeding them is an internal error)
MAX_SAMPLER_ATTEMPTS = 100_000
