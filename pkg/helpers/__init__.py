# Delsarte LP bounds helpers
