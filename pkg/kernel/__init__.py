"""RBF kernel layer."""

from kernel.rbf import GramMatrix, KernelParams, as_matrix, cross_kernel, gram, kernel_row, rbf

__all__ = ["GramMatrix", "KernelParams", "as_matrix", "cross_kernel", "gram", "kernel_row", "rbf"]
