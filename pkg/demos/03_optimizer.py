"""Minimizing area within a fixed combinatorial type."""

# %%
from polytiles import candidates, optimize, prisms
from polytiles.combinatorics import CombinatorialType

# Start from a tall triangular prism and let the face planes move.
seed = prisms.prism_polyhedron(prisms.regular_polygon(3), 3.0)
t = CombinatorialType(seed.faces)
res = optimize.minimize_within_type(t, seed, restarts=3, perturbation=0.1)
print("area", res.area, "after", res.iterations, "iterations")

# %%
# At a minimizer the inscribed ball touches each face at its centroid.
rep = optimize.lindelof_check(res.polyhedron)
print("max residual", rep.max_residual, "max deficit", rep.max_deficit)

# %%
# The tall seed fails the test: its end faces miss the ball.
print("seed deficit", optimize.lindelof_check(seed).max_deficit)

# %%
# The nine-faced tile comes from the same machinery with a D3 constraint.
p = candidates.build("enneahedron")
print("enneahedron", p.face_areas().sum(), optimize.lindelof_check(p).max_residual)

# %%
# Kelvin's truncated octahedron is not circumscribed: its squares sit
# outside the ball, so it is not the best of its type.
print("kelvin deficit", optimize.lindelof_check(candidates.build("truncated-octahedron")).max_deficit)
