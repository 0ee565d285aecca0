# Utils package for the Stern measure toolkit
from .export_data import Report, write_report
from .import_data import parse_dyadic, parse_integer, parse_rational, parse_real

__all__ = ['Report', 'write_report', 'parse_dyadic', 'parse_integer', 'parse_rational', 'parse_real']
