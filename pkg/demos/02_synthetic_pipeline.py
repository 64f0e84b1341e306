"""Full pipeline run on synthetic expert exports.

Builds activation stacks for two pretend binary experts whose responses
overlap on the same image region (think: one model for a part, one for
the whole object), writes them as interchange files, and runs the
localization pipeline end to end. Artifacts land in demos/out/.
"""

from pathlib import Path

import numpy as np

from divcam import (
    ExpertExport,
    PipelineConfig,
    run_pipeline,
    save_png,
    save_tensor,
)

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)
rng = np.random.default_rng(42)


def gaussian_blob(height, width, center_y, center_x, sigma):
    ys, xs = np.mgrid[0:height, 0:width]
    return np.exp(-((ys - center_y) ** 2 + (xs - center_x) ** 2) / (2.0 * sigma**2))


# Each expert's activation stack: 64 channels of 7x7 maps. Both respond
# around the lower-right, but the class-of-interest expert focuses on a
# tighter spot inside the shared region.
def make_expert(center, sigma, name):
    response = gaussian_blob(7, 7, *center, sigma)
    stack = np.empty((64, 7, 7), dtype=np.float32)
    for channel in range(64):
        gain = rng.uniform(0.2, 1.0)
        stack[channel] = gain * response + 0.05 * rng.random((7, 7))
    weights = rng.uniform(0.2, 1.0, size=64).astype(np.float32)
    save_tensor(stack, OUT / f"{name}_acts.npy")
    save_tensor(weights, OUT / f"{name}_weights.npy")
    return ExpertExport(
        model_id=name,
        activations=OUT / f"{name}_acts.npy",
        weights=OUT / f"{name}_weights.npy",
    )


interest = make_expert(center=(4.5, 4.5), sigma=0.8, name="part_expert")
other = make_expert(center=(4.0, 4.0), sigma=2.0, name="object_expert")

# A synthetic 224x224 "photo": gradient background with a bright square
# where the experts respond.
image = np.zeros((224, 224, 3), dtype=np.float64)
image[:, :, 0] = np.linspace(40, 90, 224)[None, :]
image[:, :, 1] = np.linspace(60, 110, 224)[:, None]
image[:, :, 2] = 70.0
image[120:200, 120:200] = (200.0, 190.0, 160.0)
save_png(image.astype(np.uint8), OUT / "scene.png")

manifest = run_pipeline(
    PipelineConfig(
        interest=interest,
        other=other,
        image=OUT / "scene.png",
        output_dir=OUT,
        alpha=5.0,
        opacity=0.5,
    )
)

print("pipeline artifacts:")
for key, value in manifest.items():
    print(f"  {key} = {value}")
print("\nBoth expert overlays light up the square; the kernel overlay")
print("narrows to the tight spot only the part expert favors.")
