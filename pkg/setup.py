import pathlib

from setuptools import setup

pkg_name = 'twostep_bss'
base_dir = pathlib.Path(__file__).parent
with open(base_dir / 'src' / pkg_name / '_version.py') as f:
    version_globals = {}
    exec(f.read(), version_globals)
    version = version_globals['__version__']

setup(
    name='twostep-bss',
    description='Two-channel blind source separation by whitening and rotation',
    long_description='''
twostep-bss separates two linearly mixed signals in two steps: the
mixture is whitened, then a single rotation angle is recovered.

Second-step methods include:
  * brute-force rotation search over geometric arc-length objectives,
  histogram mutual information, and FastICA contrasts
  * FT-PCA, a closed-form spectral method with a kernel-shift heuristic,
  and its derivative special case
  * AMUSE and SOBI lagged-covariance baselines

A synthetic benchmark harness and a command line tool are included.
''',
    long_description_content_type='text/markdown',
    version=version,
    license='MIT',
    packages=[pkg_name],
    package_dir={'': 'src'},
    install_requires=['numpy', 'scipy'],
    extras_require={'trio': ['trio']},
    entry_points={
        'console_scripts': ['twostep-bss = twostep_bss._cli:main'],
    },
    python_requires='>=3.7',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3 :: Only',
        'Programming Language :: Python :: 3.7',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Topic :: Scientific/Engineering',
        'Framework :: Trio',
    ],
)
