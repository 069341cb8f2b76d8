"""Hang-up risk analysis for highway-railway grade crossings.

Submodules:
    profile   profiles, sensor sequences, CSV ingestion
    augment   noise augmentation and dataset splitting
    vehicle   design-vehicle statistics and scenarios
    hangup    clearance simulation and risk levels
    geodata   crossing inventory and GeoJSON risk maps
    neural    from-scratch hybrid sequence model and training
    cli       command-line entry point
    service   HTTP JSON API
"""

__version__ = "0.1.0"
