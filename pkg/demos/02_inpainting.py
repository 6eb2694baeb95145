"""Image completion by sub-Riemannian mean curvature flow.

An annular-sector bite is taken out of an image with circular level lines.
Isotropic (heat-equation) filling blurs across the missing contours; the
curvature flow in orientation space continues each contour along its own
direction and reconnects the rings.  Output images land in demos/output/.
"""

import math
import time
from pathlib import Path

from srmcf import PipelineConfig, heat_baseline, inpaint, psnr, save_image
from srmcf.synthetic import rings, sector_annulus_mask

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# ---------------------------------------------------------------------------
# Ground truth and occlusion.  The mask wipes a 15-degree sector of an
# annulus: every ring crossing the sector is interrupted.
ny = nx = 64
truth = rings(ny, nx, period=10.0)
mask = sector_annulus_mask(ny, nx, r_inner=10, r_outer=26,
                           angle0=0.0, angle1=math.radians(15))
print(f"occluded pixels: {mask.sum()} of {mask.size}")

corrupted = truth.copy()
corrupted[mask] = 0.0
save_image(truth, out_dir / "inpaint_truth.pgm")
save_image(corrupted, out_dir / "inpaint_corrupted.pgm")
save_image(mask.astype(float), out_dir / "inpaint_mask.pgm")

# ---------------------------------------------------------------------------
# The isotropic baseline: explicit heat equation inside the hole with the
# intact pixels as Dirichlet data, run to convergence.  It interpolates
# smoothly but ignores contour directions.
base = heat_baseline(truth, mask, steps=5000)
p_heat = psnr(base, truth, mask)
save_image(base, out_dir / "inpaint_heat.pgm")
print(f"heat baseline PSNR on the hole: {p_heat:.2f} dB")

# ---------------------------------------------------------------------------
# The curvature-flow pipeline: lift to (x, y, theta), evolve the coupled
# level-set / intensity pair with intact nodes pinned, then project back.
# Intact pixels are returned bit-exact.
t0 = time.perf_counter()
out, report = inpaint(truth, mask, PipelineConfig(), truth=truth)
p_curv = report.psnr_region
save_image(out, out_dir / "inpaint_curvature.pgm")
print(f"curvature flow PSNR on the hole: {p_curv:.2f} dB "
      f"({report.steps} steps, {time.perf_counter() - t0:.0f}s)")
print(f"margin over the isotropic baseline: {p_curv - p_heat:+.2f} dB")
print(f"wrote results to {out_dir}/inpaint_*.pgm")
