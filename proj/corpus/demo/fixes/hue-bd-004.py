import requests

BASE = 'https://hue-bridge.local/clip/v2'
HEADERS = {'hue-application-key': 'demo-app-key'}


def create_scene(name):
    body = {'type': 'scene', 'metadata': {'name': name}, 'group': {'rid': 'room-1', 'rtype': 'room'}}
    resp = requests.post(f'{BASE}/resource/scene', headers=HEADERS, json=body)
    return resp.json()
