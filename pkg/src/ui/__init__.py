"""UI modules - rich console output."""
from .console_ui import ConsoleUI

__all__ = ["ConsoleUI"]
