def variation(role, instance, parents, seed, params):
    k = len(parents[0]["sequence"])
    return [{"sequence": [0] * k, "assignment": []}]
