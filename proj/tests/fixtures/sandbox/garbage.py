import sys


def variation(role, instance, parents, seed, params):
    sys.stdout.write("this is not a protocol line\n")
    sys.stdout.flush()
    return [parents[0]]
