# DTOrder: data transfer ordering for communication-computation overlap.
__version__ = "0.1.0"
