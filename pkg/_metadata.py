__extension_version__ = "0.1.0"
__extension_name__ = "pytket-sift"
