# Core Module for DTOrder
# Contains fundamental components: task/schedule types, feasibility checks, engines, settings.
