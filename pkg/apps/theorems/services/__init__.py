"""Services of the theorems app."""
from .theorem_service import TheoremService

__all__ = ['TheoremService']
