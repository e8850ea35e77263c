from .single import cmd_keyrate, cmd_overlap, cmd_profile
from .sweeps import cmd_distance_sweep, cmd_kse_surface, cmd_sps_table
