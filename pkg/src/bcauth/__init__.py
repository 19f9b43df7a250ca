"""Multimodal biometric confidence authentication stack."""

__version__ = "0.1.0"
