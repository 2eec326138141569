"""
Kernel definitions and Gram-matrix assembly.
"""
from pixelband.src.kernels.kernel import (
    KernelKind,
    KernelSpec,
    cross_kernel,
    eval_kernel,
    gram,
    kernel_matrix,
)

__all__ = [
    "KernelKind",
    "KernelSpec",
    "cross_kernel",
    "eval_kernel",
    "gram",
    "kernel_matrix",
]
