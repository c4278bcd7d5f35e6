# Rough Elastic Scattering
