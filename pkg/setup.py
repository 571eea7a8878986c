import os
from setuptools import setup
import streamx


def read(path):
    script_dir = os.path.dirname(__file__)
    with open(os.path.join(script_dir, path)) as f:
        return f.read()


def packages(top_dir):
    result = []

    for root, dirnames, filenames in os.walk(top_dir):
        basename = os.path.basename(root)
        if basename == '__pycache__':
            continue

        result.append(root.replace(os.sep, '.'))

    return result


def package_data(package):
    result = []

    for root, dirnames, filenames in os.walk(package):
        comps = root.split(os.sep)[1:]
        path = os.path.join(*comps) if len(comps) > 0 else ''
        result.append(os.path.join(path, '*.*'))

    return {package: result}


setup(
    name='streamx',
    version=streamx.VERSION,
    description='Streaming channel codes in the moderate deviations regime: '
                'exponents, typicality bounds, simulation and exact oracles',
    license='MIT',
    keywords='channel coding, error exponents, streaming, moderate deviations',
    long_description=read('README.rst'),
    packages=packages('streamx') + packages('streamx_data'),
    package_data=package_data('streamx_data'),
    classifiers=[
        'Development Status :: 3 - Alpha',
        'License :: OSI Approved :: MIT License',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],
    entry_points={
        'console_scripts': [
            'streamx=streamx:main'
        ]
    },
    install_requires=[
        'numpy>=1.17',
        'scipy>=1.4',
    ],
    test_suite='test',
    zip_safe=False,
)
