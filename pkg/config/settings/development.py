"""
Development settings for the risk_measures project.
"""
import sys
from .base import *

DEBUG = True

# Flag to indicate testing mode (keeps log output on the console only)
TESTING = 'test' in sys.argv

if TESTING:
    LOGGING['root']['handlers'] = ['console']
    for logger_config in LOGGING['loggers'].values():
        logger_config['handlers'] = ['console']
    LOGGING['handlers']['console']['level'] = 'WARNING'
