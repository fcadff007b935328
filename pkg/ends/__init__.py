# Ends module
