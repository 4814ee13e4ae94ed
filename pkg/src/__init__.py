"""Ground-state energy estimation by simulated quantum phase estimation"""
