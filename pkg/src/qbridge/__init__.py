"""Classical problem specifications to quantum circuits, device recommendation and decoded answers."""

__version__ = "0.1.0"
