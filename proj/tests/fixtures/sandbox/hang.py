def variation(role, instance, parents, seed, params):
    while True:
        pass
