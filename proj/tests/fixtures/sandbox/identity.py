def variation(role, instance, parents, seed, params):
    return [parents[0]]
