from __future__ import annotations

SPHERE_RADIUS: float = 1.0
"""Radius of the model sphere. The spherical measure of the whole sphere is
therefore ``4 * pi``. Recorded in every artifact."""

SCHEMA_VERSION: str = "v1"
"""Version tag written in the ``schema`` field of every JSON artifact."""

OUTPUT_DIR_ENV: str = "CIRCLELIB_OUTPUT_DIR"
"""Environment variable overriding the ``--output-dir`` of the CLI."""

CHORDAL_TOLERANCE: float = 1e-12
"""Agreement required for stereographic round trips."""

LAURENT_DEGREE: int = 32
"""Default number of negative powers in an exterior Laurent map."""

BOUNDARY_SAMPLES: int = 256
"""Default number of boundary samples used to fit an exterior map."""

CONDITION_LIMIT: float = 1e12
"""Least squares systems with a larger condition number are rejected."""

COMPONENT_CAP: int = 64
"""Largest number of peripheral continua a uniformization run accepts."""

KOEBE_TOLERANCE: float = 1e-6
"""Default circularity residual at which Koebe iteration stops."""

MAX_SWEEPS: int = 200
"""Default cap on Koebe sweeps."""

NEWTON_TOLERANCE: float = 1e-12
"""Step size below which Newton inversion of a stage is accepted."""

NEWTON_MAX_STEPS: int = 60
"""Cap on damped Newton steps when inverting a stage."""

MODULUS_TOLERANCE: float = 1e-3
"""Default relative tolerance of the cutting-plane modulus solver."""

MODULUS_MAX_ITERATIONS: int = 500
"""Cap on cutting-plane rounds."""

GRID_RESOLUTION: int = 24
"""Default number of grid cells along the shorter side of a modulus window."""

DENSITY_SNAPSHOT_LIMIT: int = 4096
"""Density snapshots of problems with more cells are elided from artifacts."""

QUADRATURE_TOLERANCE: float = 0.02
"""Default relative tolerance for sampled quadratures."""

FATNESS_RADII: int = 12
"""Number of radii in the dyadic grid of the fatness estimator."""

FATNESS_CENTERS: int = 48
"""Number of boundary-biased centers of the fatness estimator."""

DISK_FATNESS_BASELINE: float = 0.6
"""Regression floor for the fatness estimate of a spherical disk.

Small disks approach the planar value ``pi / 4``, reached by balls centered on
the boundary whose radius tends to the diameter; caps near a hemisphere dip to
about 0.65."""

MOBIUS_FATNESS_BASELINE: float = 0.1
"""Regression floor for fatness of Möbius images of squares and disks under
maps with coefficients of norm at most 2 whose pole stays a diameter away."""

RADIAL_HIT_CONSTANT: float = 8.0
"""Frozen constant of the radial-hit inequality for fat shape families."""

MAXIMAL_INEQUALITY_CONSTANT: float = 6.0
"""Frozen constant of the ball-versus-core norm comparison (area ratio 4, p = 2)."""

PLACEMENT_RETRIES: int = 2000
"""Attempts made to place one continuum before a generator gives up."""

HAUSDORFF_REFINEMENT: float = 1e-7
"""Boundary discretizations are refined until set distances move less."""

CORNER_POLES: int = 48
"""Largest number of poles clustered at each corner of a polygonal boundary
when fitting its exterior map."""

CORNER_CLUSTERING: float = 4.0
"""Tapering of the corner pole distances ``L exp(-c (sqrt(N) - sqrt(j)))``."""

STALL_SWEEPS: int = 5
"""Koebe iteration gives up after this many sweeps without a new smallest
residual."""
