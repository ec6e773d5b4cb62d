#!/usr/bin/env python3
"""Independent haversine/projection reference for the C++ test fixtures.

Run this before touching the fixtures in test_user_stats.cpp or
test_kde.cpp; the expected values frozen there must match this output.
"""
import math

R_KM = 6371.0
R_M = 6_371_000.0


def haversine_km(lon1, lat1, lon2, lat2):
    p1, p2 = math.radians(lat1), math.radians(lat2)
    dp = math.radians(lat2 - lat1)
    dl = math.radians(lon2 - lon1)
    a = math.sin(dp / 2) ** 2 + math.cos(p1) * math.cos(p2) * math.sin(dl / 2) ** 2
    return R_KM * 2 * math.atan2(math.sqrt(a), math.sqrt(1 - a))


def equirect_y_m(lat_deg):
    return R_M * math.radians(lat_deg)


fixtures = [
    # (name, lon1, lat1, lon2, lat2)
    ("fast_user_pair  (0,0)->(0,2.7)   1h apart", 0.0, 0.0, 0.0, 2.7),
    ("slow_user_pair  (0,0)->(0,0.9)   1h apart", 0.0, 0.0, 0.0, 0.9),
    ("zero_dt_pair    (-117.16,32.72)->(-117.00,32.72)", -117.16, 32.72, -117.00, 32.72),
]

for name, lon1, lat1, lon2, lat2 in fixtures:
    d = haversine_km(lon1, lat1, lon2, lat2)
    print(f"{name}: {d:.9f} km  -> speed over 1h = {d:.3f} km/h")

dy = equirect_y_m(0.01) - equirect_y_m(0.0)
print(f"equirectangular dy for 0.01 deg lat: {dy:.6f} m")
print(f"quartic kernel peak 3/(pi*h^2), h=1000 m: {3.0 / (math.pi * 1000.0**2):.18e}")
