"""A setuptools based setup module.
See:
https://packaging.python.org/en/latest/distributing.html
"""

from setuptools import setup


long_description = """
colorcell derives the electrical interface specifications of a controller
for color-center qubits (NV and SnV electrons with nearby 13C nuclei).

Starting from a target gate fidelity, it splits the error budget over the
individual error sources and inverts closed-form infidelity models into
tolerances on the drive frequency, phase, duration and amplitude, on spurs
and on magnetic field noise. A brute-force pulse simulator, a filter-function
noise integrator and a Biot-Savart field solver check the closed forms.

It also sizes the on-chip coils, estimates the readout error caused by
transverse fields, and models the power of a unit cell (one electron and
nine nuclear qubits), comparing DC field compensation with frequency
compensation of the bias-field inhomogeneity.
"""


setup(
    name='colorcell',
    version='1.0',
    description='Electrical specifications and power of color-center qubit controllers',
    long_description=long_description,
    license='MIT',
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'Topic :: Scientific/Engineering :: Physics',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Programming Language :: Python :: 3.10',
        'Programming Language :: Python :: 3.11',
    ],
    keywords='qubit NV SnV cryo-CMOS Biot-Savart spin',
    packages=['engine'],
    package_data={'engine': ['data/*.cfg']},
    python_requires='>=3.8',
    install_requires=['numpy', 'scipy'],
    entry_points={'console_scripts': ['colorcell=engine.cli:main']},
    test_suite='engine',
    tests_require=['nose2'],
    zip_safe=False
)
