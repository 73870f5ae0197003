"""Principal-value Hilbert transforms on the line and the half-line."""

from .transform import check_even_consistency, deriv_sup, hilbert_halfline, hilbert_line

__all__ = ["check_even_consistency", "deriv_sup", "hilbert_halfline", "hilbert_line"]
