from .validation import check_points, check_system

__all__ = ["check_points", "check_system"]
