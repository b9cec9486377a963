from setuptools import find_packages, setup

from headlinesignal import __version__

setup(
    name='headlinesignal',
    version=__version__,
    packages=find_packages(exclude=['headlinesignal.tests']),
    license='LGPL-3',
    install_requires=[
        'numpy', 'scipy', 'pandas', 'pytz', 'PyYAML', 'requests',
        'tenacity'],
    include_package_data=True,
    package_data={'headlinesignal.scoring': ['resources/*']},
    entry_points={
        'console_scripts': ['headlinesignal=headlinesignal.cli:main'],
    },
    classifiers=[
        'License :: OSI Approved :: GNU Lesser General Public License v3 or '
        'later (LGPLv3+)',
    ],
)
