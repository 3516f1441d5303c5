# Planar mass-distribution estimation
