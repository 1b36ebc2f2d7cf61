import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def snapshot():
    lights = requests.get(f'{BASE}/resource/light', headers=HEADERS).json()
    scenes = requests.get(f'{BASE}/resource/scene', headers=HEADERS).json()
    rooms = requests.get(f'{BASE}/resource/rooms', headers=HEADERS).json()
    return lights, scenes, rooms
