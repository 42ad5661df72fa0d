"""Log-depth approximate QFT circuits for a line of qubits with dynamic circuits."""

__version__ = "0.1.0"
__author__ = "Your Name"
__email__ = "your.email@example.com"
