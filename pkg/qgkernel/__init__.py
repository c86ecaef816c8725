# Make 'qgkernel' a package: exact Haar states, state convolution and factorization-net experiments for compact quantum groups.
