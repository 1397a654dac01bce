"""
This module provides all the global types, variables and the logger that
riembill needs.

Types:
======
#. INT_TYPE: The integer data type adopted by riembill.
#. FLOAT_TYPE: The floating data type adopted by riembill.

Variables:
==========
#. PRECISION: The floating data type precision variable.
#. FLOAT_PLUS_INFINITY: The floating data type maximum possible number.
#. FLOAT_MINUS_INFINITY: The floating data type minimum possible number.
#. INT_PLUS_INFINITY: The integer data type maximum possible number.
#. INT_MINUS_INFINITY: The integer data type minimum possible number.
#. PI: pi the ratio of a circle's circumference to its diameter.
#. DOMAIN_INDEX: curve index used for the domain boundary in events.
#. CONFIG_SCHEMA_VERSION: scene configuration schema version.
"""
# standard libraries imports
import os

# external libraries imports
import numpy as np
from pysimplelog import SingleLogger as LOG

# data types definitions
INT_TYPE   = np.int32   # must be the integer type for the whole package
FLOAT_TYPE = np.float64 # geodesic integration needs double precision

# floating precision
if FLOAT_TYPE is np.float32:
    PRECISION = FLOAT_TYPE(1e-5)
elif FLOAT_TYPE is np.float64:
    PRECISION = FLOAT_TYPE(1e-10)
else:
    raise Exception("Unknown float type '%s'"%FLOAT_TYPE)

# Constants definitions
FLOAT_PLUS_INFINITY   = FLOAT_TYPE(np.finfo(FLOAT_TYPE).max)
FLOAT_MINUS_INFINITY  = FLOAT_TYPE(np.finfo(FLOAT_TYPE).min)
INT_PLUS_INFINITY     = INT_TYPE(np.iinfo(np.int32).max)
INT_MINUS_INFINITY    = INT_TYPE(np.iinfo(np.int32).min)
PI                    = FLOAT_TYPE(np.pi)
DOMAIN_INDEX          = -1
CONFIG_SCHEMA_VERSION = 1


# Create LOGGER
class Logger(LOG):
    def custom_init(self):
        # set logfile basename
        logFile = os.path.join(os.getcwd(), "riembill")
        self.set_log_file_basename(logFile)
        # set new log types
        self.add_log_type("ray report",     name="REPORT",         level= 15)
        self.add_log_type("argument fixed", name="FIXED",          level= 20)
        self.add_log_type("numerical stop", name="SURROGATE",      level= 25)
        self.add_log_type("implement",      name="IMPLEMENTATION", level= 100)
        self.add_log_type("usage",          name="USAGE",          level= 1000)
        # set minimum level to 10
        self.set_minimum_level(10)
        # force error and critical logging no matter what logging level is
        self.force_log_type_flags(logType="error",    stdoutFlag=True, fileFlag=True)
        self.force_log_type_flags(logType="critical", stdoutFlag=True, fileFlag=True)

    def report(self, message):
        """alias to message at ray report level"""
        self.log("ray report", message)

    def fixed(self, message):
        """alias to message at fixed level"""
        self.log("argument fixed", message)

    def surrogate(self, message):
        """alias to message at numerical stop level"""
        self.log("numerical stop", message)

    def impl(self, message):
        """alias to message at implement level"""
        self.log("implement", message)

    def usage(self, message):
        """alias to message at usage level"""
        self.log("usage", message)

# initialize Logger
LOGGER = Logger(name="riembill")
