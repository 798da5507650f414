# pottab: potential-outcome inference for 2x2 tables
__version__ = "0.1.0"
