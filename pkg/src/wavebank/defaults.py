"""Central table of numeric defaults (one place, so batch runs reproduce).

============  =======  ==================================================
name          value    used by
============  =======  ==================================================
GRID_SIZE     1024     torus sampling grids (unitarity, quadrature checks)
TOL           1e-9     verification tolerance on those grids
J_LEVEL       10       dyadic grid level for cascade iterations
ITERS         12       cascade iteration budget
CASCADE_TOL   1e-6     successive-difference threshold for convergence
N_MAX         10**4    periodization truncation
K_TERMS       40       factors kept in the infinite-product transform
PF_TOL        1e-7     peripheral-spectrum tolerance
============  =======  ==================================================
"""

GRID_SIZE = 1024
TOL = 1e-9
J_LEVEL = 10
ITERS = 12
CASCADE_TOL = 1e-6
N_MAX = 10**4
K_TERMS = 40
PF_TOL = 1e-7
