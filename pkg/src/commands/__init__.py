# Command modules for the Stern measure toolkit
from . import (
    dilation_command,
    figure_command,
    fourier_command,
    sequence_command,
    verify_command,
)

__all__ = [
    'dilation_command', 'figure_command', 'fourier_command',
    'sequence_command', 'verify_command',
]
