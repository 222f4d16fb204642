"""
Example config for the workbench. DO NOT edit this one directly.
Instead, copy this template over to config.py and make changes to it.
"""

# A list of engine modules to load on start-up.
engines = ["reach.contacts", "reach.reachgrid", "reach.traversal"]

# Whether the workbench is running in dev-mode (debug logging).
dev_mode = False

# The DSN used by sentry.io's error handler.
sentry_dsn = ""

# Block size in bytes of every simulated disk.
page_size = 4096

# Buffer pool capacity in blocks (4 MB with the default page size).
buffer_blocks = 1024

# How many sequential reads cost as much as one random read.
sequential_discount = 20

# Contact distance threshold in meters.
d_T = 25.0

# Long-edge resolutions of the ReachGraph, in ticks.
resolutions = [2, 4, 8, 16, 32]

# Partition depth d_p of the ReachGraph placement.
partition_depth = 32

# ReachGrid temporal bucket length R_T in ticks.
grid_ticks = 20

# ReachGrid spatial cell side R_S in meters.
grid_meters = 250.0

# Default seed for generators and workloads.
seed = 0
