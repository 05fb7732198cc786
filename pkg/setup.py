"""
Setup Script
"""

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

INSTALL_REQUIRES = [
    'numpy', 'pandas', 'sympy>=1.14'
]

TESTS_REQUIRE = [
    'jsonschema'
]

LONG_DESCRIPTION = ""

setup(name='crystbox',
      version=0.1,
      description='exact analysis of Euclidean crystallographic groups: torsion, '
                  'extension classes, splitting and Hodge types of the associated tori',
      license='GPL v.3',
      long_description=LONG_DESCRIPTION,
      packages=['crystbox'],
      install_requires=INSTALL_REQUIRES,
      tests_require=TESTS_REQUIRE,
      extras_require={'test': TESTS_REQUIRE},
      scripts=['scripts/crystbox.py']
)
