"""Tolerance ladder shared by the numerical core."""

# exact algebraic identities: reshuffle involution, traces, product marginals
EXACT_TOL = 1e-12

# anything that goes through an eigen-decomposition
EIG_TOL = 1e-9

# Hermiticity of freshly constructed operators
HERM_TOL = 1e-9

# eigenvalues in [-CLAMP_TOL, 0) are treated as 0
CLAMP_TOL = 1e-9

# rank cutoff for canonical Kraus extraction
KRAUS_CUTOFF = 1e-10

# unitarity / orthonormality of user-supplied matrices and bases
UNITARY_TOL = 1e-10

# max-norm distance under which enumerated vertices are merged
VERTEX_DEDUP_TOL = 1e-10

# probabilities below this make a measurement outcome impossible
OUTCOME_TOL = 1e-12
