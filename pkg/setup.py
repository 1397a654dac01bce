"""
In order to work properly, this script must be put one layer or directory
outside of riembill package directory.
"""
##########################################################################################
########################################  IMPORTS  #######################################
# standard distribution imports
import os, sys

# setup imports
from setuptools import setup

# check python version
if sys.version_info[:2] < (3, 6):
    raise RuntimeError("Python version >= 3.6 required.")



##########################################################################################
#################################  PACKAGE PATH AND NAME  ################################
PACKAGE_PATH    = '.'
PACKAGE_NAME    = 'riembill'



##########################################################################################
######################################  MANIFEST.in  #####################################
commands = [# include MANIFEST.in
            '# include this file, to ensure we can recreate source distributions',
            'include MANIFEST.in',
            # exclude all .log files
            '\n# exclude all logs',
            'global-exclude *.log',
            # exclude outputs
            '\n# exclude all produced outputs',
            'global-exclude *.csv',
            'global-exclude *.svg',
            'global-exclude *.png',
            # exclude all of the version control metadata
            '\n# exclude all of the version control metadata',
            'global-exclude *.git*',
            'global-exclude .git/*',
            # include all Example files
            '\n# include all Example files',
            'global-include Examples/*/*.py',
            'global-include Examples/*/*.json',
            # include all README files
            '\n# include all readme files found',
            'global-include *README.*',
            ]


with open('MANIFEST.in','w') as fd:
    for l in commands:
        fd.write(l)
        fd.write('\n')



##########################################################################################
######################################  CLASSIFIERS  #####################################
CLASSIFIERS = """\
Development Status :: 3 - Alpha
Intended Audience :: Science/Research
Intended Audience :: Education
Natural Language :: English
Programming Language :: Python :: 3
Topic :: Scientific/Engineering
Topic :: Scientific/Engineering :: Mathematics
Topic :: Scientific/Engineering :: Physics
Operating System :: OS Independent
"""



##########################################################################################
######################################  DESCRIPION  ######################################
# create descriptions
LONG_DESCRIPTION = ["riembill simulates billiards on two dimensional Riemannian surfaces and recovers the obstacles of a billiard from its travelling times. ",
                    "Rays leave the boundary of a simply connected domain, follow geodesics of the surface metric and reflect on strictly convex obstacles. ",
                    "The travelling times of many rays form a dataset from which tangency strata, echographs and bitangents are computed. ",
                    "Obstacles are reconstructed as envelopes of the rays that graze them, and chains of envelopes are walked until every boundary closes. ",
                    "riembill also builds Riemannian ellipses and a trapping obstacle whose rays never escape a focal corridor. ",]
DESCRIPTION      = [ LONG_DESCRIPTION[0] ]

# get package info
PACKAGE_INFO={}
with open(os.path.join(PACKAGE_PATH, PACKAGE_NAME,'__pkginfo__.py')) as fd:
    exec(fd.read(), PACKAGE_INFO)



##########################################################################################
################################### USEFUL DEFINITIONS ###################################
def is_package(path):
    return (os.path.isdir(path) and os.path.isfile(os.path.join(path, '__init__.py')))

def get_packages(path, base="", exclude=None):
    if exclude is None:
        exclude = []
    assert isinstance(exclude, (list, set, tuple)), "exclude must be a list"
    exclude = [os.path.abspath(e) for e in exclude]
    packages = {}
    for item in os.listdir(path):
        d = os.path.join(path, item)
        if sum([e in os.path.abspath(d) for e in exclude]):
            continue
        if is_package(d):
            if base:
                module_name = "%(base)s.%(item)s" % vars()
            else:
                module_name = item
            packages[module_name] = d
            packages.update(get_packages(d, module_name, exclude))
    return packages



##########################################################################################
#####################################  PACKAGE DATA  #####################################
# get packages and remove everything that is not riembill
PACKAGES = get_packages(path=PACKAGE_PATH, exclude=("tests", "examples", "Examples"))
PACKAGES = dict((k, v) for k, v in PACKAGES.items() if k.split('.')[0] == PACKAGE_NAME)

# metadata
metadata = dict(# package
                name             = PACKAGE_NAME,
                packages         = sorted(PACKAGES.keys()),
                package_dir      = PACKAGES,
                # info
                version          = PACKAGE_INFO['__version__'] ,
                # Description
                description      = "\n".join(DESCRIPTION),
                long_description = "\n".join(LONG_DESCRIPTION),
                # Licence and classifiers
                classifiers      = [_f for _f in CLASSIFIERS.split('\n') if _f],
                platforms        = ["Windows", "Linux", "Mac OS-X", "Unix"],
                python_requires  = ">=3.6",
                # Dependent packages (distributions)
                install_requires = ["numpy>=1.13",
                                    "scipy>=1.0",
                                    "pysimplelog>=0.3.0",
                                    "matplotlib>=1.4" ],
                extras_require   = {"test": ["pytest>=3.0"]},
                # command line
                entry_points     = {"console_scripts": ["riembill=riembill.Cli:main"]},
                )



##########################################################################################
#####################################  LAUNCH SETUP  #####################################
setup(**metadata)
