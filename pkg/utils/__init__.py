"""utils: defaults, YAML config loading, data files and report rendering."""
