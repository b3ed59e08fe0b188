from setuptools import setup, find_packages

setup(
    name='conecert',
    version='16.1.0',
    packages=find_packages(),
    install_requires=['numpy',
                      'scipy',
                      'pandas',
                      'sympy>=1.13',
                      'tqdm',],
    extras_require={
        'test': ['pytest', ],
    },

    package_data={
        'conecert': ['sample_data/*.json', ],
    },
    entry_points={
        'console_scripts': ['conecert=conecert.cli:main', ],
    },

    description='conecert: exact certificates for non-harmonic cones',
    long_description='Certify exactly that the cone of H = a z1 zbar2 + |z|^2 '
                     'lies in no zero set of a bigraded harmonic polynomial, '
                     'and run the twisted spherical mean experiments built '
                     'on it',
    license='GPL',
    keywords='harmonic polynomials twisted spherical means injectivity'
)
