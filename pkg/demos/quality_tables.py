"""
Full-reference quality tables
=============================

Runs the whole benchmark on a small stack and prints the two metric tables:
depth map against ground truth, and all-in-focus image against the sharp
texture. The first row holds the ideal value of each metric.

The reduced 20x96x96 stack is quick but coarse: blur per frame is larger
and the operator ranking can differ from the default 60x302x302 setup
(pass ``--full`` for that, about 40 s).
"""

import sys
import tempfile

from sffbench.bench import run_bench
from sffbench.camera import SimConfig
from sffbench.metrics import reports_to_csv

frames, size = 20, 96
if len(sys.argv) > 1 and sys.argv[1] == "--full":
    frames, size = 60, 302

with tempfile.TemporaryDirectory() as out:
    depth, aif = run_bench(out, SimConfig(frames=frames, size=size))

print("depth map vs ground truth")
print(reports_to_csv(depth))
print("all-in-focus vs texture")
print(reports_to_csv(aif))

##############################################################################
# Lower MSE pairs with higher PSNR; MD is the single worst pixel.

best = min(depth[1:], key=lambda r: r.mse)
print(f"lowest depth MSE: {best.method} ({best.mse:.4f}, PSNR {best.psnr:.2f} dB)")
