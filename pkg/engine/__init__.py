"""
colorcell: electrical-interface specifications and unit-cell power for
color-center quantum processors.
"""
import logging

__version__ = '1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())
