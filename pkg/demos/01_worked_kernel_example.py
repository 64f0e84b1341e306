"""Walk through the directed divergence kernel on a small worked example.

Two 3x3 activation maps stand in for the outputs of two binary expert
models on the same image. The kernel amplifies the cells where the first
(class-of-interest) map is more confident than the second, after each map
is scaled by its own maximum.
"""

import numpy as np

from divcam import addk, concentration

np.set_printoptions(precision=3, suppress=True)

x = np.array([[1.0, 1.0, 5.0], [0.0, 6.0, 4.0], [0.0, 1.0, 0.0]])
x_other = np.array([[8.0, 0.0, 7.0], [1.0, 4.0, 3.0], [1.0, 2.0, 1.0]])

print("class-of-interest map (max 6):")
print(x)
print("\ncompeting-class map (max 8):")
print(x_other)

print("\nmax-normalized difference, amplified by alpha=15, exponentiated:")
result = addk(x, x_other, alpha=15.0)
print(result.raw)

# The center cell dominates: x has its peak there (6/6 = 1.0) while the
# competing map sits at 4/8 = 0.5, so the kernel blows the gap up to
# exp(15 * 0.5) ~ 1808. Cells where the competing map wins collapse
# toward zero instead of going negative.
print("\ndisplay-ready map (scaled so the peak is 1):")
print(result.normalized)

print("\ncells at >= 50% of the peak:", concentration(result, 0.5))

# Direction matters: swapping the arguments asks "where is the OTHER
# expert more confident", a different question with a different answer.
swapped = addk(x_other, x, alpha=15.0)
print("\nswapped operands give a different map:")
print(swapped.raw)
