"""How the amplification parameter concentrates the kernel's output.

Runs the kernel over the worked-example maps at increasing alpha and
counts how many cells stay within half of the peak: the footprint only
ever shrinks. Also renders the sweep grid image via the pipeline.
"""

from pathlib import Path

import numpy as np

from divcam import (
    ExpertExport,
    PipelineConfig,
    addk,
    alpha_sweep,
    concentration,
    save_tensor,
)

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

x = np.array([[1.0, 1.0, 5.0], [0.0, 6.0, 4.0], [0.0, 1.0, 0.0]], dtype=np.float32)
x_other = np.array([[8.0, 0.0, 7.0], [1.0, 4.0, 3.0], [1.0, 2.0, 1.0]], dtype=np.float32)

print("alpha   cells at >= 50% of peak (of 9)")
for alpha in (0.5, 1, 2, 5, 15, 50):
    count = concentration(addk(x, x_other, alpha), 0.5)
    print(f"{alpha:>5g}   {count}")

save_tensor(x, OUT / "sweep_interest.npy")
save_tensor(x_other, OUT / "sweep_other.npy")

manifest = alpha_sweep(
    PipelineConfig(
        interest=ExpertExport(model_id="n1", cam=OUT / "sweep_interest.npy"),
        other=ExpertExport(model_id="n2", cam=OUT / "sweep_other.npy"),
        output_dir=OUT,
    ),
    alphas=[1, 5, 15, 50],
)
print(f"\nsweep grid written to {manifest['sweep_grid']}")
