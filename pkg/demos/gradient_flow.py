"""
Gradient flow of a moment-map component
=======================================

For the square (CP^1 x CP^1) each nonzero critical value xi gives a linear
flow z_i(t) = z_i exp(<alpha_i, xi> t).  The component <Phi, xi> decreases
along it and every sample drops below -epsilon in finite time.
"""
import random

import numpy as np

from ktoric import build_delzant_data, critical_values_Z
from ktoric.fixtures import product_of_lines
from ktoric.kirwan import draw_flow_samples, flow_retraction_check, gradient_flow

D = build_delzant_data(product_of_lines(2))
rng = random.Random(0)
for c in critical_values_Z(D):
    if not any(c.xi):
        continue
    eps = -float(sum(a * b for a, b in zip(D.iota_star_eta, c.xi))) / 2
    samples = draw_flow_samples(D, c.xi, 20, rng, eps)
    rep = flow_retraction_check(D, c.xi, samples)
    times = [s.hit_time for s in rep.samples]
    print(f"xi = {tuple(map(str, c.xi))}: eps = {eps}, hit times in [{min(times):.3f}, {max(times):.3f}]")

# a single trajectory, sampled at a few times
z0 = np.array([0.6, 0.8, 0.3, 0.2], dtype=complex)
for t in (0.0, 0.5, 1.0, 2.0):
    print(t, np.round(np.abs(gradient_flow(D, (-1, -1), z0, t)), 4))
