"""Unit-volume areas of the conjectured space-filling tiles, by face count."""

# %%
import numpy as np

from polytiles import bounds, candidates

# Each tile is built at unit volume, so its surface area is directly
# comparable with the others. The face-count bound is the least area any
# convex polyhedron with that many faces can have.
print(f"{'name':28s} {'n':>3s} {'area':>8s} {'bound':>8s}")
for name in candidates.TABLE1:
    try:
        a = candidates.build(name).face_areas().sum()
    except candidates.OptimizerFailureError as exc:
        print(f"{name:28s}  -- {exc}")
        continue
    n = candidates.spec(name).n
    print(f"{name:28s} {n:3d} {a:8.4f} {bounds.goldberg_bound(n).bound_value:8.4f}")

# %%
# More faces buys less area, and the ball is the limit.
print("ball:", (36 * np.pi) ** (1 / 3))

# %%
# Regular solids that do not tile sit on or near the bound.
for name in ("regular-tetrahedron", "regular-octahedron", "regular-dodecahedron"):
    p = candidates.build(name)
    print(name, p.face_areas().sum(), bounds.goldberg_bound(p.n_faces).bound_value)
