"""Cutting corners, and telling combinatorial types apart."""

# %%
from polytiles import candidates, combinatorics, mesh, optimize

# Shaving a thin slice off any vertex lowers the cost A^3 / V^2.
for name in ("cube", "regular-tetrahedron", "truncated-octahedron"):
    rows, slope, base = optimize.truncation_experiment(candidates.build(name), 0, steps=4)
    print(name, base, [round(c, 6) for _, c in rows], "slope", slope)

# %%
# Five-faced polyhedra come in two types.
for name in ("triangular-prism", "square-pyramid"):
    t = combinatorics.CombinatorialType(candidates.build(name).faces)
    print(name, "->", combinatorics.classify_5hedron(t))

# %%
# Face vectors: how many ways n faces can split into triangles,
# quadrilaterals, pentagons and so on.
for n in range(4, 9):
    print(n, len(combinatorics.enumerate_face_vectors(n)))

# %%
# Canonical codes ignore labels: the hull of Kelvin's vertices has the
# same code as the hand-built solid.
p = candidates.build("truncated-octahedron")
q = mesh.convex_hull(p.vertices)
print(combinatorics.equivalent(combinatorics.CombinatorialType(p.faces), combinatorics.CombinatorialType(q.faces)))
