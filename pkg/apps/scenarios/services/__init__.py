"""Services package for the scenarios app."""
from .space_service import SpaceService

__all__ = [
    'SpaceService',
]
