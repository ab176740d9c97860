"""Right prisms: the best height for a given base shape."""

# %%
from polytiles import prisms

# For a fixed base shape the least-area unit-volume prism has
# area 3 (P^2 / 2A)^(1/3), with P and A the base perimeter and area.
for k in range(3, 9):
    ps = prisms.optimal_prism(prisms.regular_polygon(k))
    print(f"{k}-gon  area {ps.surface_area:.6f}  height {ps.h:.6f}")

# %%
# Two pentagons with the same angles in a different order have the same
# incircle, perimeter and area, so their prisms tie.
for base in (prisms.cairo_pentagon(), prisms.prismatic_pentagon()):
    print(prisms.interior_angles(base).round(6), prisms.optimal_prism_area(base))

# %%
# The optimal prism over a tangential base is circumscribed about a ball:
# its height is the ball's diameter.
from polytiles.mesh import insphere

ps = prisms.optimal_prism(prisms.regular_polygon(6))
print("h =", ps.h, " 2r =", 2 * insphere(ps.polyhedron()).radius)
