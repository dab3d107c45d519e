# UI Module for DTOrder
# Command-line surface.
